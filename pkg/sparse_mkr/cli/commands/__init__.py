from sparse_mkr.cli.commands import check, compare, fit, kernel_table

COMMANDS = [kernel_table, check, fit, compare]
