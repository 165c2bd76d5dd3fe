#!/usr/bin/env python
"""
Command line for the census project.

Besides Django's own commands this runs ``census``, ``analyze``,
``identify``, ``construct`` and ``report`` from the census app, e.g.

    ./manage.py census --tets 6 --jobs 4
"""
import os
import sys

SETTINGS_MODULE = 'api.settings'


def main(argv=None):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', SETTINGS_MODULE)
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Django is not importable; install the project requirements "
            "into the active environment before running census commands."
        ) from exc
    execute_from_command_line(argv if argv is not None else sys.argv)


if __name__ == '__main__':
    main()
