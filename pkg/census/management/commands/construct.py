"""
Django management command to build a triangulation from its family name.

Usage:
    python manage.py construct "B[T7|1,1|1,0]"

    # Write the gluing table to a file
    python manage.py construct "LST(3,7,-10)" --output lst-3-7.tri
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
import logging

from constructions.services import ConstructionService
from triangulations.exceptions import TriangulationError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Build a family member (B, H, K, E or LST) and print or write its gluing table'

    def add_arguments(self, parser):
        parser.add_argument('name', help='Family name, e.g. "H[~T6^2|3,-2]"')
        parser.add_argument(
            '--output',
            help='Write the gluing table to this file instead of standard output',
        )

    def handle(self, *args, **options):
        try:
            report = ConstructionService().build(options['name'])
        except TriangulationError as e:
            raise CommandError(f"{options['name']}: {e}")

        tri = report.triangulation
        self.stdout.write(self.style.SUCCESS(f'{report.name}: {report.size} tetrahedra'))
        if tri is not None:
            self.stdout.write(
                f'  valid={tri.is_valid()} closed={not tri.has_boundary()} orientable={tri.is_orientable()}'
            )
            self.stdout.write(f'  signature {report.signature}')
        if report.homology is not None:
            self.stdout.write(f'  H1 = {report.homology}')
        if report.manifold_label:
            self.stdout.write(f'  manifold {report.manifold_label}')
        for note in report.notes:
            self.stdout.write(self.style.WARNING(f'  {note}'))

        if tri is None:
            return
        if options['output']:
            path = Path(options['output'])
            try:
                path.write_text(tri.to_text())
            except OSError as e:
                raise CommandError(f'Cannot write {path}: {e}')
            self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
            logger.info(f'Wrote {report.name} to {path}')
        else:
            self.stdout.write(tri.to_text(), ending='')
