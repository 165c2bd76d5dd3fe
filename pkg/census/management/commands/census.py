"""
Django management command to run the closed non-orientable census.

Every size from 1 up to --tets is enumerated and classified in turn; the
per-size summary is printed as it completes.

Usage:
    python manage.py census --tets 5

    # Six tetrahedra on every core, resumable, archives written and stored
    python manage.py census --tets 6 --jobs 0 --checkpoint ckpt --output out --store

    # Check that aggressive pruning agrees with conservative pruning
    python manage.py census --tets 6 --compare-modes
"""

from django.core.management.base import BaseCommand, CommandError
import logging

from census.engine import HARD_CAP
from census.exceptions import CensusError, InconsistencyError
from census.gluings import CensusMode
from census.services import CensusService, compare_modes, missing_golden
from triangulations.exceptions import UnsupportedSizeError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Enumerate and classify minimal closed non-orientable P2-irreducible triangulations'

    def add_arguments(self, parser):
        parser.add_argument(
            '--tets',
            type=int,
            required=True,
            help=f'Largest number of tetrahedra (1 to {HARD_CAP})',
        )
        parser.add_argument(
            '--mode',
            choices=[m.value for m in CensusMode],
            default=CensusMode.AGGRESSIVE.value,
            help='Pruning mode (default: aggressive)',
        )
        parser.add_argument(
            '--jobs',
            type=int,
            default=None,
            help='Worker processes; 0 uses every core (default: CENSUS_JOBS setting)',
        )
        parser.add_argument('--checkpoint', help='Directory for resumable progress files')
        parser.add_argument('--output', help='Directory for census-n<k>.txt archives')
        parser.add_argument(
            '--store',
            action='store_true',
            help='Save runs and records to the database',
        )
        parser.add_argument(
            '--compare-modes',
            action='store_true',
            help='Also run the other pruning mode and fail if the census differs',
        )
        parser.add_argument(
            '--check-golden',
            action='store_true',
            help='Fail if a named census triangulation is missing from the output',
        )

    def handle(self, *args, **options):
        max_tets = options['tets']
        mode = CensusMode(options['mode'])
        service = CensusService(progress=lambda message: self.stdout.write(f'  {message}'))

        self.stdout.write(self.style.SUCCESS(f'Starting {mode.value} census up to {max_tets} tetrahedra...'))
        try:
            outcome = service.run(
                max_tets,
                mode=mode,
                jobs=options['jobs'],
                checkpoint_dir=options['checkpoint'],
                output_dir=options['output'],
                store=options['store'],
            )
        except UnsupportedSizeError as e:
            raise CommandError(str(e))
        except CensusError as e:
            logger.error(f'Census failed: {e}', exc_info=True)
            raise CommandError(str(e))

        result = outcome.result
        sizes = range(1, max_tets + 1)
        for n in sizes:
            line = f'n={n}: {result.triangulation_count(n)} triangulations, {result.manifold_count(n)} manifolds'
            review = len(result.review(n))
            if review:
                self.stdout.write(self.style.WARNING(f'{line} ({review} for review)'))
            else:
                self.stdout.write(line)
        total_tris = sum(result.triangulation_count(n) for n in sizes)
        total_manifolds = sum(result.manifold_count(n) for n in sizes)
        self.stdout.write(self.style.SUCCESS(f'Total: {total_tris} triangulations, {total_manifolds} manifolds'))
        for n, path in outcome.paths.items():
            self.stdout.write(f'  archive {path}')
        for run in outcome.runs:
            self.stdout.write(f'  stored run {run.id} (n={run.tetrahedra})')

        if options['compare_modes']:
            other = CensusMode.CONSERVATIVE if mode == CensusMode.AGGRESSIVE else CensusMode.AGGRESSIVE
            self.stdout.write(f'Running {other.value} census for comparison...')
            second = service.run(max_tets, mode=other, jobs=options['jobs'], checkpoint_dir=options['checkpoint'])
            conservative, aggressive = (
                (second.result, result) if mode == CensusMode.AGGRESSIVE else (result, second.result)
            )
            try:
                compare_modes(conservative, aggressive, sizes)
            except InconsistencyError as e:
                raise CommandError(str(e), returncode=2)
            self.stdout.write(self.style.SUCCESS('Both pruning modes agree'))

        if options['check_golden']:
            missing = missing_golden(result, sizes)
            if missing:
                raise CommandError(f'Named triangulations missing: {", ".join(missing)}', returncode=2)
            self.stdout.write(self.style.SUCCESS('Every named triangulation was found'))
