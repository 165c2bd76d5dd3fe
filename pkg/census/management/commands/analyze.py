"""
Django management command to run the invariant battery on a gluing table file.

Usage:
    python manage.py analyze manifold.tri

    # Skip the normal surface test
    python manage.py analyze manifold.tri --no-normal
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from constructions.services import ConstructionService
from triangulations.exceptions import TriangulationError
from triangulations.services import TriangulationAnalyzer
from triangulations.triangulation import Triangulation


def read_triangulation(path: str) -> Triangulation:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CommandError(f'Cannot read {path}: {e}')
    try:
        return Triangulation.from_text(text)
    except TriangulationError as e:
        raise CommandError(f'{path}: {e}')


class Command(BaseCommand):
    help = 'Print validity, homology, P2 verdict, Turaev-Viro values and the recognised census manifold'

    def add_arguments(self, parser):
        parser.add_argument('file', help='Gluing table file')
        parser.add_argument(
            '--no-normal',
            action='store_true',
            help='Skip the normal surface P2-irreducibility test',
        )

    def handle(self, *args, **options):
        tri = read_triangulation(options['file'])
        report = TriangulationAnalyzer().analyze(tri, with_normal=not options['no_normal'])
        validity = report.validity

        self.stdout.write(self.style.SUCCESS(f'{report.size} tetrahedra'))
        self.stdout.write(f'  vertices {report.vertices}, edges {report.edges}, faces {report.faces}')
        self.stdout.write(
            f'  valid={tri.is_valid()} closed={validity.closed_manifold} orientable={validity.orientable}'
        )
        for sig in report.signatures:
            self.stdout.write(f'  signature {sig}')
        if report.homology is not None:
            self.stdout.write(f'  H1 = {report.homology}')
            self.stdout.write(f'  dim H1(Z/2) = {report.homology_z2}')
        if report.fundamental_group is not None:
            self.stdout.write(f'  pi1 = {report.fundamental_group}')
        if report.pillow:
            self.stdout.write(self.style.WARNING('  contains a pillow 2-sphere'))
        if report.snapped:
            self.stdout.write(self.style.WARNING('  contains a snapped 2-sphere'))
        for value in report.turaev_viro:
            self.stdout.write(f'  TV_{value.r} = {value.value:.12f}')
        if report.verdict is not None:
            self.stdout.write(f'  P2 verdict: {report.verdict.value}')
        for note in report.notes:
            self.stdout.write(self.style.WARNING(f'  {note}'))

        if validity.closed_manifold and len(report.signatures) == 1:
            _, names, manifold = ConstructionService().identify(tri)
            if names:
                self.stdout.write(self.style.SUCCESS(f'  family {", ".join(names)}'))
                self.stdout.write(self.style.SUCCESS(f'  manifold {manifold.label}'))
