"""
Django management command to render the census tables.

Usage:
    # From archives written by the census command
    python manage.py report out/census-n6.txt out/census-n7.txt

    # From the published results, as Markdown
    python manage.py report --golden --format markdown
"""

from django.core.management.base import BaseCommand, CommandError

from census.archive import read_archive
from census.exceptions import CensusError
from census.reports import FORMATS, archive_context, golden_context, render_report


class Command(BaseCommand):
    help = 'Render census counts, family frequencies and the manifold list'

    def add_arguments(self, parser):
        parser.add_argument('archives', nargs='*', help='Census archive files')
        parser.add_argument(
            '--golden',
            action='store_true',
            help='Use the published results instead of archives',
        )
        parser.add_argument('--format', choices=list(FORMATS), default='text')
        parser.add_argument(
            '--sizes',
            help='Comma-separated sizes the archives must cover, e.g. "6,7"',
        )

    def handle(self, *args, **options):
        if options['golden'] == bool(options['archives']):
            raise CommandError('Give either archive files or --golden')
        try:
            if options['golden']:
                context = golden_context()
            else:
                sizes = [int(s) for s in options['sizes'].split(',')] if options['sizes'] else []
                archives = [read_archive(path) for path in options['archives']]
                for archive in archives:
                    archive.verify()
                context = archive_context(archives, sizes)
        except (CensusError, ValueError) as e:
            raise CommandError(str(e))
        self.stdout.write(render_report(context, options['format']), ending='')
