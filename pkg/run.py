import sys

from interstatis.cli import cli_main

# Forçar saída sem buffer para aparecer no terminal
sys.stdout.reconfigure(line_buffering=True)
sys.stderr.reconfigure(line_buffering=True)

if __name__ == '__main__':
    sys.exit(cli_main())
