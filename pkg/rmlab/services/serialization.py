"""
JSON files for fields, codes and subspaces, through the wire models.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import BaseModel

from rmlab.errors import ParameterError
from rmlab.models.schemas import CodeModel, FieldSpec, SubspaceModel
from rmlab.services.gf import Field, field_create
from rmlab.services.linset import Subspace, subspace_from_model, subspace_to_model
from rmlab.services.rmcode import Code, code_from_model, code_to_model

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_json(path: PathLike) -> Dict[str, Any]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParameterError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path}: malformed JSON ({e.msg} at line {e.lineno})")
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: expected a JSON object")
    return data


def write_model(model: BaseModel, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {type(model).__name__} to {path}")


def detect_kind(data: Dict[str, Any]) -> str:
    """'code', 'subspace' or 'field' from the keys of a parsed object."""
    if "kind" in data:
        return "code"
    if "r" in data:
        return "subspace"
    if "p" in data:
        return "field"
    raise ParameterError("object is neither a field, a code nor a subspace")


def read_kind(path: PathLike, kind: str) -> Dict[str, Any]:
    """Parsed object of a file that must hold a 'field', 'code' or 'subspace'."""
    data = read_json(path)
    found = detect_kind(data)
    if found != kind:
        raise ParameterError(f"{path}: holds a {found}, expected a {kind}")
    return data


def load_field(path: PathLike) -> Field:
    return field_create(FieldSpec.model_validate(read_kind(path, "field")))


def save_field(F: Field, path: PathLike) -> None:
    write_model(F.spec, path)


def load_code(path: PathLike) -> Code:
    return code_from_model(CodeModel.model_validate(read_kind(path, "code")))


def save_code(code: Code, path: PathLike) -> None:
    write_model(code_to_model(code), path)


def load_subspace(path: PathLike) -> Subspace:
    return subspace_from_model(SubspaceModel.model_validate(read_kind(path, "subspace")))


def save_subspace(U: Subspace, path: PathLike) -> None:
    write_model(subspace_to_model(U), path)
