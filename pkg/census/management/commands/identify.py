"""
Django management command to look a triangulation up among the named census members.

Usage:
    python manage.py identify manifold.tri
"""

from django.core.management.base import BaseCommand

from constructions.services import ConstructionService

from .analyze import read_triangulation


class Command(BaseCommand):
    help = 'Print the signature, matching family names and census manifold of a gluing table file'

    def add_arguments(self, parser):
        parser.add_argument('file', help='Gluing table file')

    def handle(self, *args, **options):
        tri = read_triangulation(options['file'])
        sig, names, manifold = ConstructionService().identify(tri)
        self.stdout.write(f'signature {sig}')
        if not names:
            self.stdout.write(self.style.WARNING('Not one of the named census triangulations'))
            return
        self.stdout.write(self.style.SUCCESS(f'family {", ".join(names)}'))
        self.stdout.write(self.style.SUCCESS(f'manifold {manifold.label} (H1 = {manifold.homology})'))
