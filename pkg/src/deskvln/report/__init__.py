from deskvln.report.report import cmd_report
