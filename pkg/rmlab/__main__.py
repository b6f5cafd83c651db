from rmlab.main import run

run()
