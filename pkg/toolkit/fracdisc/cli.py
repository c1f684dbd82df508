"""
Console entry point: `fracdisc <mode> ...` runs the fracdisc management command
"""
import os
import sys


def main(argv=None):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'toolkit.settings')
    from django.core.management import execute_from_command_line

    argv = sys.argv if argv is None else argv
    execute_from_command_line([argv[0], 'fracdisc', *argv[1:]])


if __name__ == '__main__':
    main()
