from io import StringIO
from itertools import product
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import mock
import unittest

import networkx as nx
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase, override_settings

from constructions import golden
from constructions.services import golden_index
from triangulations.exceptions import UnsupportedSizeError
from triangulations.homology import AbelianGroup
from triangulations.isosig import signature
from triangulations.triangulation import TriangulationBuilder
from triangulations.turaev_viro import TuraevViroValue

from .archive import ArchiveRecord, CensusArchive, read_archive, write_archive
from .classify import (
    CandidateRecord,
    CensusResult,
    ClassifyOptions,
    InvariantVector,
    ManifoldClass,
    RecordStatus,
    group_records,
)
from .engine import CensusConfig, CensusEngine, Checkpoint, run_unit, work_units
from .exceptions import ArchiveChecksumError, CensusError, InconsistencyError
from .gluings import CensusFilter, CensusMode, EdgeUnion, enumerate_gluings, face_maps
from .models import CensusRecord, CensusRun
from .pairings import enumerate_face_pairings, parse_face_pairing
from .reports import archive_context, golden_context, render_report
from .services import CensusService, compare_modes

EXTENDED = getattr(settings, 'CENSUS_EXTENDED_TESTS', False)

# Connected 4-regular multigraphs with loops on 1 to 8 nodes.
FACE_PAIRING_COUNTS = {1: 1, 2: 2, 3: 4, 4: 10, 5: 28, 6: 97, 7: 359, 8: 1635}

ANY_CLOSED = CensusFilter(require_non_orientable=False)


def labelled_multigraphs(n):
    """Every connected 4-regular multigraph on ``n`` labelled nodes, by brute force."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for loops in product(range(3), repeat=n):
        for counts in product(range(5), repeat=len(pairs)):
            degree = [2 * loops[i] for i in range(n)]
            for (i, j), c in zip(pairs, counts):
                degree[i] += c
                degree[j] += c
            if any(d != 4 for d in degree):
                continue
            graph = nx.MultiGraph()
            graph.add_nodes_from(range(n))
            for i in range(n):
                graph.add_edges_from([(i, i)] * loops[i])
            for (i, j), c in zip(pairs, counts):
                graph.add_edges_from([(i, j)] * c)
            if nx.is_connected(graph):
                yield graph


def pairing_graph(pairing):
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(pairing.size))
    graph.add_edges_from((a, b) for (a, _), (b, _) in pairing.pairs)
    return graph


def brute_force_signatures(n, require_non_orientable=True):
    """Signatures of closed triangulations over every choice of the 6^{2n} gluing maps."""
    found = set()
    for pairing in enumerate_face_pairings(n):
        options = [face_maps(f, g) for (_, f), (_, g) in pairing.pairs]
        for choice in product(*options):
            builder = TriangulationBuilder(n)
            for ((t, f), (u, _)), perm in zip(pairing.pairs, choice):
                builder.join(t, f, u, perm)
            tri = builder.build()
            if not tri.is_closed_manifold():
                continue
            if require_non_orientable and tri.is_orientable():
                continue
            found.add(signature(tri))
    return found


def search_signatures(n, census_filter):
    return {
        signature(tri)
        for pairing in enumerate_face_pairings(n)
        for tri in enumerate_gluings(pairing, census_filter)
    }


def one_tetrahedron_records():
    """Census records for the closed orientable one-tetrahedron triangulations."""
    pairing = enumerate_face_pairings(1)[0]
    by_signature = {signature(tri): tri for tri in enumerate_gluings(pairing, ANY_CLOSED)}
    records = []
    for sig in sorted(by_signature):
        tri = by_signature[sig]
        records.append(CandidateRecord(
            signature=sig,
            triangulation=tri,
            status=RecordStatus.CENSUS,
            invariants=InvariantVector.of(tri, (3,), 1e-9),
            manifold_class=len(records) + 1,
        ))
    return records


def synthetic_invariants(homology, value):
    return InvariantVector(AbelianGroup.parse(homology), 1, (TuraevViroValue(r=3, value=value, tolerance=1e-9),))


class FacePairingTest(TestCase):
    """Test cases for face pairing enumeration"""

    def test_small_counts(self):
        """Test the number of face pairings on one to four tetrahedra"""
        for n in range(1, 5):
            self.assertEqual(len(enumerate_face_pairings(n)), FACE_PAIRING_COUNTS[n], f"n={n}")

    @unittest.skipUnless(EXTENDED, "enumerating 5 and 6 tetrahedron pairings is slow")
    def test_larger_counts(self):
        """Test the number of face pairings on five and six tetrahedra"""
        for n in (5, 6):
            self.assertEqual(len(enumerate_face_pairings(n)), FACE_PAIRING_COUNTS[n], f"n={n}")

    def test_matches_multigraph_isomorphism(self):
        """Test pairings agree with isomorphism classes of multigraphs up to three tetrahedra"""
        for n in range(1, 4):
            classes = []
            for graph in labelled_multigraphs(n):
                if not any(nx.is_isomorphic(graph, other) for other in classes):
                    classes.append(graph)
            pairings = [pairing_graph(p) for p in enumerate_face_pairings(n)]
            self.assertEqual(len(pairings), len(classes), f"n={n}")
            for graph in pairings:
                self.assertEqual(sum(nx.is_isomorphic(graph, other) for other in classes), 1)

    def test_pairings_are_canonical_and_distinct(self):
        """Test every pairing is canonical with a distinct key"""
        pairings = enumerate_face_pairings(4)
        self.assertTrue(all(p.is_canonical() for p in pairings))
        self.assertEqual(len({p.key() for p in pairings}), len(pairings))

    def test_every_face_used_once(self):
        """Test each pairing uses every face of every tetrahedron exactly once"""
        for pairing in enumerate_face_pairings(3):
            faces = [face for pair in pairing.pairs for face in pair]
            self.assertEqual(sorted(faces), [(t, f) for t in range(3) for f in range(4)])

    def test_text_round_trip(self):
        """Test parsing the text form gives the same pairing"""
        for pairing in enumerate_face_pairings(3):
            self.assertEqual(parse_face_pairing(pairing.to_text()), pairing)

    def test_size_limits(self):
        """Test sizes outside the supported range are rejected"""
        with self.assertRaises(UnsupportedSizeError):
            enumerate_face_pairings(0)
        with self.assertRaises(UnsupportedSizeError):
            enumerate_face_pairings(9)


class GluingSearchTest(TestCase):
    """Test cases for the gluing permutation search"""

    def test_face_maps(self):
        """Test there are six maps between two faces"""
        maps = face_maps(0, 3)
        self.assertEqual(len(maps), 6)
        self.assertTrue(all(p(0) == 3 for p in maps))

    def test_edge_union_detects_reversal(self):
        """Test identifying an edge with itself reversed fails"""
        edges = EdgeUnion(1)
        self.assertTrue(edges.union(0, 1, 1))
        self.assertTrue(edges.union(1, 2, 0))
        self.assertFalse(edges.union(0, 2, 0))
        self.assertTrue(edges.union(0, 2, 1))

    def test_matches_brute_force(self):
        """Test the conservative search finds exactly the brute-force triangulations up to two tetrahedra"""
        conservative = CensusFilter.for_mode(CensusMode.CONSERVATIVE)
        for n in (1, 2):
            self.assertEqual(search_signatures(n, conservative), brute_force_signatures(n), f"n={n}")

    def test_matches_brute_force_orientable(self):
        """Test the search without the orientability filter on two tetrahedra"""
        self.assertEqual(search_signatures(2, ANY_CLOSED), brute_force_signatures(2, require_non_orientable=False))

    @unittest.skipUnless(EXTENDED, "6^6 gluings per pairing")
    def test_matches_brute_force_three(self):
        """Test the conservative search on three tetrahedra against brute force"""
        conservative = CensusFilter.for_mode(CensusMode.CONSERVATIVE)
        self.assertEqual(search_signatures(3, conservative), brute_force_signatures(3))

    def test_results_are_closed(self):
        """Test every result is a closed triangulation with the requested orientability"""
        non_orientable = CensusFilter.for_mode(CensusMode.CONSERVATIVE)
        for pairing in enumerate_face_pairings(2):
            for tri in enumerate_gluings(pairing, non_orientable):
                self.assertTrue(tri.is_closed_manifold())
                self.assertFalse(tri.is_orientable())

    def test_aggressive_is_subset(self):
        """Test aggressive pruning only removes triangulations"""
        aggressive = CensusFilter.for_mode(CensusMode.AGGRESSIVE, non_orientable=False)
        for n in (1, 2):
            self.assertLessEqual(search_signatures(n, aggressive), search_signatures(n, ANY_CLOSED))

    def test_units_partition_search(self):
        """Test the six first-pair units together give the whole search"""
        pairing = enumerate_face_pairings(2)[0]
        whole = {signature(t) for t in enumerate_gluings(pairing, ANY_CLOSED)}
        parts = set()
        for first in range(6):
            parts |= {signature(t) for t in enumerate_gluings(pairing, ANY_CLOSED, first)}
        self.assertEqual(parts, whole)

    def test_one_per_isomorphism_class(self):
        """Test no two emitted triangulations of a pairing are isomorphic"""
        for n in (1, 2):
            for pairing in enumerate_face_pairings(n):
                emitted = [signature(t) for t in enumerate_gluings(pairing, ANY_CLOSED)]
                self.assertEqual(len(emitted), len(set(emitted)), pairing.to_text())

    def test_unit_signatures(self):
        """Test a work unit reports the classes its part of the search emits"""
        pairing = enumerate_face_pairings(2)[0]
        for first in range(6):
            emitted = sorted(signature(t) for t in enumerate_gluings(pairing, ANY_CLOSED, first))
            self.assertEqual(run_unit(pairing.to_text(), first, ANY_CLOSED), emitted)

    def test_mode_flags(self):
        """Test the filter each mode uses"""
        self.assertFalse(CensusFilter.for_mode(CensusMode.CONSERVATIVE).prune_low_degree_edges)
        self.assertTrue(CensusFilter.for_mode(CensusMode.AGGRESSIVE).prune_low_degree_edges)
        self.assertTrue(CensusFilter.for_mode(CensusMode.CONSERVATIVE).prune_invalid_edges)


class ClassificationTest(TestCase):
    """Test cases for grouping analysed candidates into manifold classes"""

    def setUp(self):
        self.options = ClassifyOptions(levels=(3,))
        self.records = one_tetrahedron_records()

    def record(self, tri, invariants):
        return CandidateRecord(signature(tri), tri, RecordStatus.CENSUS, invariants=invariants)

    def test_distinct_invariants_make_classes(self):
        """Test records with different invariants get their own classes in signature order"""
        first, second = self.records[0].triangulation, self.records[-1].triangulation
        records = [self.record(second, synthetic_invariants('Z_5', 1.0)), self.record(first, synthetic_invariants('Z_4', 2.0))]
        result = group_records(1, records, CensusResult(), self.options)
        self.assertEqual(result.manifold_count(1), 2)
        ordered = sorted(records, key=lambda r: r.signature)
        self.assertEqual([r.manifold_class for r in ordered], [1, 2])

    def test_collision_with_smaller_size(self):
        """Test invariants matching a smaller manifold send the record to review"""
        tri = self.records[0].triangulation
        invariants = synthetic_invariants('Z_4', 1.0)
        prior = CensusResult(classes=[ManifoldClass(id=7, size=0, invariants=invariants)])
        record = self.record(tri, invariants)
        group_records(1, [record], prior, self.options)
        self.assertEqual(record.status, RecordStatus.REVIEW)
        self.assertEqual(record.manifold_class, 7)
        self.assertEqual(prior.triangulation_count(1), 0)

    def test_same_triangulation_joins_class(self):
        """Test equal invariants with a move path share a class"""
        tri = self.records[0].triangulation
        invariants = synthetic_invariants('Z_4', 1.0)
        records = [self.record(tri, invariants), self.record(tri, invariants)]
        result = group_records(1, records, CensusResult(), self.options)
        self.assertEqual(result.manifold_count(1), 1)
        self.assertEqual(result.triangulation_count(1), 2)

    def test_dropped_records_are_skipped(self):
        """Test dropped records take no class"""
        tri = self.records[0].triangulation
        record = CandidateRecord(signature(tri), tri, RecordStatus.DROPPED, "simplifies to 0 tetrahedra")
        result = group_records(1, [record], CensusResult(), self.options)
        self.assertIsNone(record.manifold_class)
        self.assertEqual(result.classes, [])

    def test_invariant_tolerance(self):
        """Test Turaev-Viro values within tolerance match"""
        a = synthetic_invariants('Z', 1.0)
        b = synthetic_invariants('Z', 1.0 + 1e-12)
        c = synthetic_invariants('Z', 1.1)
        self.assertTrue(a.matches(b))
        self.assertFalse(a.matches(c))
        self.assertFalse(a.matches(synthetic_invariants('Z_2', 1.0)))

    def test_invariant_dict_round_trip(self):
        """Test invariants survive conversion to JSON-ready data"""
        invariants = self.records[0].invariants
        self.assertTrue(InvariantVector.from_dict(invariants.to_dict()).matches(invariants))

    def test_mode_comparison(self):
        """Test a triangulation only the conservative run found is an inconsistency"""
        conservative = CensusResult(records={1: self.records})
        aggressive = CensusResult(records={1: self.records[1:]})
        compare_modes(conservative, conservative, [1])
        with self.assertRaises(InconsistencyError):
            compare_modes(conservative, aggressive, [1])


class CensusEngineTest(TestCase):
    """Test cases for the census driver"""

    def setUp(self):
        self.tmp = TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def config(self, **kwargs):
        kwargs.setdefault('mode', CensusMode.CONSERVATIVE)
        kwargs.setdefault('options', ClassifyOptions(levels=(3, 4)))
        return CensusConfig(**kwargs)

    def test_size_cap(self):
        """Test the engine refuses more than eight tetrahedra"""
        with self.assertRaises(UnsupportedSizeError):
            CensusConfig(max_tets=9)
        with self.assertRaises(UnsupportedSizeError):
            CensusConfig(max_tets=0)

    def test_work_units(self):
        """Test there are six units per face pairing with unique ids"""
        units = work_units(enumerate_face_pairings(3))
        self.assertEqual(len(units), 6 * FACE_PAIRING_COUNTS[3])
        self.assertEqual(len({u[0] for u in units}), len(units))

    def test_small_census_is_empty(self):
        """Test there are no minimal P2-irreducible triangulations on at most two tetrahedra"""
        result = CensusEngine(self.config(max_tets=2)).run()
        for n in (1, 2):
            self.assertEqual(result.triangulation_count(n), 0)
            self.assertEqual(result.manifold_count(n), 0)

    @unittest.skipUnless(EXTENDED, "classifying three to five tetrahedra takes minutes")
    def test_census_up_to_five_is_empty(self):
        """Test the census is empty up to five tetrahedra"""
        result = CensusEngine(self.config(max_tets=5)).run()
        for n in range(1, 6):
            self.assertEqual(result.triangulation_count(n), golden.CENSUS_COUNTS[n][0])

    def test_checkpoint_resume(self):
        """Test a second run reads finished units from the checkpoint instead of searching"""
        config = self.config(max_tets=2, checkpoint_dir=Path(self.tmp.name))
        first = [signature(t) for t in CensusEngine(config).generate(2)]
        path = Path(self.tmp.name) / 'census-n2-conservative.ckpt'
        self.assertEqual(len(path.read_text().splitlines()), 6 * FACE_PAIRING_COUNTS[2])

        with mock.patch('census.engine.run_unit', side_effect=AssertionError("unit rerun")):
            second = [signature(t) for t in CensusEngine(config).generate(2)]
        self.assertEqual(first, second)

    def test_partial_checkpoint(self):
        """Test only the units missing from a checkpoint are run"""
        config = self.config(max_tets=2, checkpoint_dir=Path(self.tmp.name))
        expected = [signature(t) for t in CensusEngine(config).generate(2)]
        path = Path(self.tmp.name) / 'census-n2-conservative.ckpt'
        lines = path.read_text().splitlines()
        path.write_text('\n'.join(lines[:-2]) + '\n')

        with mock.patch('census.engine.run_unit', wraps=run_unit) as patched:
            resumed = [signature(t) for t in CensusEngine(config).generate(2)]
        self.assertEqual(patched.call_count, 2)
        self.assertEqual(resumed, expected)

    def test_unwritable_checkpoint(self):
        """Test a checkpoint path under a file is reported"""
        blocker = Path(self.tmp.name) / 'file'
        blocker.write_text('')
        with self.assertRaises(CensusError):
            Checkpoint(blocker / 'census.ckpt')

    def test_workers_do_not_change_result(self):
        """Test a process pool gives the same candidates as a single worker"""
        serial = CensusEngine(self.config(max_tets=2, jobs=1)).generate(2)
        parallel = CensusEngine(self.config(max_tets=2, jobs=2)).generate(2)
        self.assertEqual([signature(t) for t in serial], [signature(t) for t in parallel])


class CensusArchiveTest(TestCase):
    """Test cases for the archive format"""

    def setUp(self):
        self.records = one_tetrahedron_records()
        self.result = CensusResult(records={1: self.records})
        self.archive = CensusArchive.from_result(self.result, 1, 'conservative')

    def test_round_trip_is_byte_identical(self):
        """Test reading and rewriting an archive reproduces its bytes"""
        text = self.archive.dumps()
        self.assertEqual(CensusArchive.loads(text).dumps(), text)

    def test_file_round_trip(self):
        """Test writing and reading a file"""
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / 'census-n1.txt'
            write_archive(self.archive, path)
            loaded = read_archive(path)
        self.assertEqual(loaded.records, self.archive.records)
        self.assertEqual(loaded.tetrahedra, 1)

    def test_records_rebuild(self):
        """Test every table rebuilds its signature and invariants"""
        self.archive.verify()
        for record, original in zip(self.archive.records, self.records):
            self.assertEqual(signature(record.triangulation), original.signature)
            self.assertTrue(record.invariant_vector().matches(original.invariants))

    def test_counts(self):
        """Test census counts from the records"""
        self.assertEqual(self.archive.triangulation_count, len(self.records))
        self.assertEqual(self.archive.manifold_count, len(self.records))

    def test_checksum_mismatch(self):
        """Test editing a record is detected"""
        text = self.archive.dumps()
        tampered = text.replace('\tcensus\t', '\treview\t', 1)
        with self.assertRaises(ArchiveChecksumError):
            CensusArchive.loads(tampered)

    def test_truncated(self):
        """Test a missing footer is reported"""
        lines = self.archive.dumps().splitlines(keepends=True)
        with self.assertRaises(CensusError):
            CensusArchive.loads(''.join(lines[:-1]))

    def test_duplicate_signature(self):
        """Test verification rejects repeated signatures"""
        archive = CensusArchive('conservative', 1, self.archive.records + self.archive.records[:1])
        with self.assertRaises(CensusError):
            archive.verify()

    def test_record_line(self):
        """Test a record line has six fields"""
        line = self.archive.records[0].to_line()
        self.assertEqual(len(line.split('\t')), 6)
        self.assertEqual(ArchiveRecord.from_line(line), self.archive.records[0])


class ReportTest(TestCase):
    """Test cases for the census tables"""

    def setUp(self):
        self.text = render_report(golden_context(), 'text')

    def row(self, label):
        return next(line for line in self.text.splitlines() if line.startswith(label))

    def test_family_frequencies(self):
        """Test each family row of the published results"""
        expected = {
            'Layered torus bundles': ['6', '4', '10'],
            'Layered Klein bottle bundles': ['8', '0', '8'],
            'Plugged thin I-bundles': ['4', '6', '10'],
            'Plugged thick I-bundles': ['4', '7', '11'],
            'Exceptional triangulations': ['3', '0', '3'],
        }
        for label, counts in expected.items():
            self.assertEqual(self.row(label).split()[-3:], counts, label)

    def test_totals(self):
        """Test there are 41 triangulations of 8 manifolds"""
        totals = [line.split() for line in self.text.splitlines() if line.startswith('Total')]
        self.assertEqual(totals[0][-2:], ['41', '8'])
        self.assertEqual(totals[1][-3:], ['24', '17', '41'])

    def test_double_count_note(self):
        """Test the six-tetrahedron column explains its sum of 25"""
        self.assertIn('sums to 25', self.text)
        self.assertIn('there are 24 distinct triangulations', self.text)
        self.assertIn('B[T6^1|0,1|1,0] and B[K6^2|0,-1|-1,0]', self.text)

    def test_empty_sizes_merged(self):
        """Test sizes without triangulations share one summary row"""
        self.assertEqual(self.row('<= 5').split()[-2:], ['0', '0'])

    def test_manifold_list(self):
        """Test every manifold appears with its homology"""
        for manifold in golden.GOLDEN_MANIFOLDS:
            self.assertIn(f"{manifold.label}  [{manifold.tetrahedra} tetrahedra, H1 = {manifold.homology}]", self.text)

    def test_markdown(self):
        """Test the Markdown rendering has the same totals"""
        markdown = render_report(golden_context(), 'markdown')
        self.assertIn('| Plugged thick I-bundles | 4 | 7 | 11 |', markdown)

    def test_deterministic(self):
        """Test rendering twice gives identical text"""
        self.assertEqual(render_report(golden_context(), 'text'), self.text)

    def test_unknown_format(self):
        """Test an unknown format is rejected"""
        with self.assertRaises(CensusError):
            render_report(golden_context(), 'html')

    def test_missing_archive(self):
        """Test a requested size without an archive is reported"""
        with self.assertRaises(CensusError):
            archive_context([], sizes=[6])


class CensusCommandTest(TestCase):
    """Test cases for the management commands"""

    def setUp(self):
        self.tmp = TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def call(self, *args, **kwargs):
        out = StringIO()
        call_command(*args, stdout=out, **kwargs)
        return out.getvalue()

    def test_census_rejects_size(self):
        """Test more than eight tetrahedra is a usage error"""
        with self.assertRaises(CommandError):
            self.call('census', '--tets', '9')

    def test_census_small(self):
        """Test a small census prints empty counts and stores its runs"""
        output = self.call('census', '--tets', '2', '--mode', 'conservative', '--jobs', '1',
                           '--output', self.tmp.name, '--store')
        self.assertIn('n=2: 0 triangulations, 0 manifolds', output)
        self.assertIn('Total: 0 triangulations, 0 manifolds', output)
        self.assertEqual(CensusRun.objects.count(), 2)
        self.assertTrue((Path(self.tmp.name) / 'census-n2.txt').exists())
        read_archive(Path(self.tmp.name) / 'census-n2.txt').verify()

    def test_construct_writes_file(self):
        """Test a layered solid torus is written to a file"""
        path = Path(self.tmp.name) / 'lst.tri'
        output = self.call('construct', 'LST(3,7,-10)', '--output', str(path))
        self.assertIn('4 tetrahedra', output)
        self.assertEqual(len(path.read_text().splitlines()), 4)

    def test_construct_bad_name(self):
        """Test an unparseable name is a usage error"""
        with self.assertRaises(CommandError):
            self.call('construct', 'B[nope]')

    def test_analyze_bounded(self):
        """Test analysing a solid torus skips the closed-census checks"""
        path = Path(self.tmp.name) / 'lst.tri'
        self.call('construct', 'LST(1,2,-3)', '--output', str(path))
        output = self.call('analyze', str(path))
        self.assertIn('has boundary; closed-census analyses skipped', output)

    @override_settings(TV_LEVELS='3')
    def test_analyze_golden_member(self):
        """Test analysing a named triangulation prints its homology and manifold"""
        path = Path(self.tmp.name) / 'k2s1.tri'
        self.call('construct', 'B[K6^1|1,0|0,1]', '--output', str(path))
        output = self.call('analyze', str(path), '--no-normal')
        self.assertIn('H1 = Z + Z + Z_2', output)
        self.assertIn('manifold K2 x S1', output)

    def test_analyze_missing_file(self):
        """Test a missing file is a usage error"""
        with self.assertRaises(CommandError):
            self.call('analyze', str(Path(self.tmp.name) / 'absent.tri'))

    def test_identify(self):
        """Test identifying the doubly named six-tetrahedron triangulation"""
        path = Path(self.tmp.name) / 'pair.tri'
        self.call('construct', 'B[T6^1|0,1|1,0]', '--output', str(path))
        output = self.call('identify', str(path))
        self.assertIn('B[T6^1|0,1|1,0]', output)
        self.assertIn('B[K6^2|0,-1|-1,0]', output)
        self.assertIn('T2 x I / ((0,1),(1,0))', output)

    def test_report_golden(self):
        """Test the report command renders the published tables"""
        output = self.call('report', '--golden')
        self.assertIn('Plugged thick I-bundles', output)
        self.assertIn('sums to 25', output)

    def test_report_needs_input(self):
        """Test the report command needs archives or --golden"""
        with self.assertRaises(CommandError):
            self.call('report')


class CensusApiTest(TestCase):
    """Test cases for the census endpoints"""

    def setUp(self):
        records = one_tetrahedron_records()
        archive = CensusArchive.from_result(CensusResult(records={1: records}), 1, 'conservative')
        config = CensusConfig(max_tets=1, mode=CensusMode.CONSERVATIVE)
        self.run = CensusService().store(archive, config)

    def test_list_runs(self):
        """Test stored runs are listed"""
        response = self.client.get("/api/census/runs")
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual(len(data), 1)
        self.assertEqual(data[0]["tetrahedra"], 1)
        self.assertEqual(data[0]["status"], "completed")

    def test_run_detail(self):
        """Test a run comes back with its records"""
        response = self.client.get(f"/api/census/runs/{self.run.id}")
        self.assertEqual(response.status_code, 200)
        records = response.json()["records"]
        self.assertEqual(len(records), CensusRecord.objects.filter(run=self.run).count())
        self.assertIn("homology", records[0]["invariants"])

    def test_missing_run(self):
        """Test an unknown run id gives a 404"""
        response = self.client.get("/api/census/runs/9999")
        self.assertEqual(response.status_code, 404)
        self.assertFalse(response.json()["success"])

    def test_golden_report(self):
        """Test the report endpoint renders the published results"""
        response = self.client.get("/api/census/report?format=markdown")
        self.assertEqual(response.status_code, 200)
        self.assertIn('| **Total** |', response.json()["report"])

    def test_entry_points(self):
        """Test the server entry points expose the API and manage.py runs census commands"""
        from api.asgi import application as asgi_application
        from api.wsgi import application as wsgi_application
        import manage

        self.assertTrue(callable(asgi_application))
        self.assertTrue(callable(wsgi_application))
        out = StringIO()
        with mock.patch('sys.stdout', out):
            manage.main(['manage.py', 'help', 'census'])
        self.assertIn('--tets', out.getvalue())


@unittest.skipUnless(EXTENDED, "hour-scale census runs")
class FullCensusTest(TestCase):
    """Test cases reproducing the census on six and seven tetrahedra"""

    def golden_signatures(self, n):
        return {sig for sig, names in golden_index().items() if golden.manifold_of(names[0]).tetrahedra == n}

    def test_six_tetrahedra(self):
        """Test 24 triangulations of 5 manifolds, equal to the named ones, and agreement of both modes"""
        aggressive = CensusService().run(6, mode=CensusMode.AGGRESSIVE, jobs=0).result
        self.assertEqual(aggressive.triangulation_count(6), 24)
        self.assertEqual(aggressive.manifold_count(6), 5)
        self.assertEqual({r.signature for r in aggressive.census(6)}, self.golden_signatures(6))
        conservative = CensusService().run(6, mode=CensusMode.CONSERVATIVE, jobs=0).result
        compare_modes(conservative, aggressive, range(1, 7))
        self.assertEqual({r.signature for r in conservative.census(6)}, {r.signature for r in aggressive.census(6)})

    def test_seven_tetrahedra(self):
        """Test 17 triangulations of 3 manifolds on seven tetrahedra"""
        result = CensusService().run(7, jobs=0).result
        self.assertEqual(result.triangulation_count(7), 17)
        self.assertEqual(result.manifold_count(7), 3)
        self.assertEqual({r.signature for r in result.census(7)}, self.golden_signatures(7))
