from deskvln.evaluate.evaluate import cmd_eval, run_description
