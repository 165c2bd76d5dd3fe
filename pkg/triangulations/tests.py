from itertools import combinations
from math import gcd
import json
import random

from django.test import TestCase
from sympy import Matrix

from constructions import golden
from constructions.families import construct

from .detectors import detect_pillow_2sphere, detect_snapped_2sphere
from .exceptions import (
    DisconnectedError,
    IllegalMoveError,
    InvalidGluingError,
    ParseError,
    UnsupportedSizeError,
)
from .homology import (
    AbelianGroup,
    GroupPresentation,
    fundamental_group,
    homology_h1,
    homology_h1_z2,
    simplify_presentation,
    smith_normal_form,
)
from .isosig import canonical_form, is_isomorphic, parse_signature, signature
from .moves import SIZE_CHANGE, MoveKind, MoveSite, apply, legal_sites, move_connect, simplify
from .normal import (
    P2Verdict,
    SurfaceKind,
    classify_surface,
    euler_characteristic,
    is_admissible,
    matching_equations,
    p2_verdict,
    vertex_link_vector,
    vertex_normal_surfaces,
)
from .perm import Perm4
from .triangulation import Triangulation, TriangulationBuilder
from .turaev_viro import turaev_viro, turaev_viro_vector

IDENTITY = Perm4.identity()
FOLD = Perm4(0, 1, 3, 2)


def double_tetrahedron() -> Triangulation:
    """Two tetrahedra glued by the identity on every face: a 2-tetrahedron S³."""
    return Triangulation([[(1, IDENTITY)] * 4, [(0, IDENTITY)] * 4])


def one_tetrahedron_closed() -> list:
    """All closed 3-manifold triangulations on one tetrahedron (with repeats)."""
    found = []
    for (a, b), (c, d) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        for p in Perm4.all():
            if p(a) != b:
                continue
            for q in Perm4.all():
                if q(c) != d:
                    continue
                table = [[None] * 4]
                table[0][a] = (0, p)
                table[0][b] = (0, p.inverse())
                table[0][c] = (0, q)
                table[0][d] = (0, q.inverse())
                try:
                    tri = Triangulation(table)
                except InvalidGluingError:
                    continue
                if tri.validity().closed_manifold:
                    found.append(tri)
    return found


def random_relabel(tri: Triangulation, rng: random.Random) -> Triangulation:
    order = list(range(tri.size))
    rng.shuffle(order)
    perms = Perm4.all()
    return tri.relabel(order, [rng.choice(perms) for _ in range(tri.size)])


class Perm4Test(TestCase):
    """Test cases for Perm4"""

    def test_identity_is_index_zero(self):
        """Test the identity comes first in lexicographic order"""
        self.assertEqual(Perm4.all()[0], IDENTITY)
        self.assertEqual(len(Perm4.all()), 24)
        self.assertEqual(len(set(Perm4.all())), 24)

    def test_composition_applies_right_first(self):
        """Test (p * q)(i) == p(q(i))"""
        for p in Perm4.all():
            for q in Perm4.all():
                pq = p * q
                for i in range(4):
                    self.assertEqual(pq(i), p(q(i)))

    def test_inverse_and_sign(self):
        """Test inverse composes to identity and sign is multiplicative"""
        for p in Perm4.all():
            self.assertEqual(p * p.inverse(), IDENTITY)
            for q in Perm4.all():
                self.assertEqual((p * q).sign(), p.sign() * q.sign())
        self.assertEqual(Perm4.transposition(1, 2).sign(), -1)
        self.assertEqual(Perm4(1, 2, 3, 0).sign(), -1)

    def test_string_round_trip(self):
        """Test parsing the printed form"""
        p = Perm4(2, 0, 3, 1)
        self.assertEqual(str(p), "2031")
        self.assertIs(Perm4.from_string("2031"), p)

    def test_rejects_non_permutation(self):
        """Test repeated images are refused"""
        with self.assertRaises(ValueError):
            Perm4(0, 0, 1, 2)


class TriangulationTest(TestCase):
    """Test cases for Triangulation and its skeleton"""

    def setUp(self):
        """Set up test data"""
        self.tri = double_tetrahedron()

    def test_skeleton_counts(self):
        """Test the 2-tetrahedron sphere has 4 vertices, 6 edges, 4 faces"""
        skeleton = self.tri.skeleton
        self.assertEqual((skeleton.num_vertices, skeleton.num_edges, skeleton.num_faces), (4, 6, 4))
        self.assertEqual(skeleton.euler_characteristic(self.tri.size), 0)
        self.assertTrue(all(skeleton.edge_degree(e) == 2 for e in range(6)))

    def test_validity(self):
        """Test the double tetrahedron is a closed orientable manifold"""
        report = self.tri.validity()
        self.assertTrue(report.closed_manifold)
        self.assertTrue(report.orientable)
        self.assertTrue(all(link.is_sphere for link in self.tri.skeleton.vertex_links))

    def test_broken_involution_rejected(self):
        """Test a gluing without its mirror is refused"""
        with self.assertRaises(InvalidGluingError):
            Triangulation([[(1, IDENTITY), None, None, None], [None] * 4])

    def test_self_glued_face_rejected(self):
        """Test a face glued to itself is refused"""
        builder = TriangulationBuilder(1)
        with self.assertRaises(InvalidGluingError):
            builder.join(0, 2, 0, Perm4.transposition(0, 1))

    def test_text_format(self):
        """Test the gluing table text survives a round trip and reports bad lines"""
        self.assertEqual(Triangulation.from_text(self.tri.to_text()), self.tri)
        with self.assertRaises(ParseError) as ctx:
            Triangulation.from_text("# comment\n1:0123 1:0123 bdy\n")
        self.assertIn("line 2", str(ctx.exception))

    def test_components(self):
        """Test a disjoint union splits into its pieces"""
        union = Triangulation([[(1, IDENTITY)] * 4, [(0, IDENTITY)] * 4, [(3, IDENTITY)] * 4, [(2, IDENTITY)] * 4])
        self.assertFalse(union.is_connected())
        self.assertEqual([c.size for c in union.components()], [2, 2])

    def test_bounded_single_tetrahedron(self):
        """Test a lone tetrahedron has boundary and disc vertex links"""
        tri = Triangulation([[None] * 4])
        self.assertTrue(tri.has_boundary())
        self.assertTrue(tri.is_valid())
        self.assertTrue(all(link.is_disc for link in tri.skeleton.vertex_links))


class IsomorphismSignatureTest(TestCase):
    """Test cases for canonical forms and signatures"""

    def setUp(self):
        """Set up test data"""
        self.rng = random.Random(7)
        self.samples = [double_tetrahedron()] + one_tetrahedron_closed()

    def test_signature_invariant_under_relabelling(self):
        """Test every relabelling gives the same signature"""
        for tri in self.samples:
            expected = signature(tri)
            for _ in range(5):
                self.assertEqual(signature(random_relabel(tri, self.rng)), expected)

    def test_parse_signature_gives_canonical_form(self):
        """Test decoding a signature rebuilds the canonical triangulation"""
        for tri in self.samples:
            rebuilt = parse_signature(signature(tri))
            self.assertEqual(rebuilt, canonical_form(tri))
            self.assertTrue(is_isomorphic(rebuilt, tri))

    def test_distinguishes_different_triangulations(self):
        """Test the 1-tetrahedron lens spaces get different signatures"""
        by_homology = {}
        for tri in one_tetrahedron_closed():
            by_homology.setdefault(str(homology_h1(tri)), set()).add(signature(tri))
        self.assertTrue(by_homology["Z_4"].isdisjoint(by_homology["Z_5"]))

    def test_disconnected_rejected(self):
        """Test canonical forms need a connected triangulation"""
        union = Triangulation([[(1, IDENTITY)] * 4, [(0, IDENTITY)] * 4, [(3, IDENTITY)] * 4, [(2, IDENTITY)] * 4])
        with self.assertRaises(DisconnectedError):
            signature(union)

    def test_malformed_signature(self):
        """Test garbage signatures raise ParseError"""
        with self.assertRaises(ParseError):
            parse_signature("xyz")
        with self.assertRaises(ParseError):
            parse_signature(signature(double_tetrahedron())[:-1])


def _determinantal_divisors(rows):
    """gcd of all k x k minors, for k = 1 .. rank."""
    m = Matrix(rows)
    divisors = []
    for k in range(1, min(m.shape) + 1):
        g = 0
        for r in combinations(range(m.rows), k):
            for c in combinations(range(m.cols), k):
                g = gcd(g, int(m.extract(list(r), list(c)).det()))
        if g == 0:
            break
        divisors.append(g)
    return divisors


class HomologyTest(TestCase):
    """Test cases for Smith normal form, H1 and the fundamental group"""

    def test_smith_normal_form_against_minors(self):
        """Test diagonal products equal the determinantal divisors"""
        rng = random.Random(3)
        for _ in range(25):
            rows = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(3)]
            form = smith_normal_form(rows)
            divisors = _determinantal_divisors(rows)
            product = 1
            for k, d in enumerate(divisors):
                product *= form.diagonal[k]
                self.assertEqual(product, d)
            self.assertEqual(form.rank, len(divisors))
            for a, b in zip(form.diagonal[:form.rank], form.diagonal[1:form.rank]):
                self.assertEqual(b % a, 0)

    def test_smith_normal_form_transforms(self):
        """Test left * M * right equals the diagonal"""
        rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        form = smith_normal_form(rows)
        product = Matrix(form.left) * Matrix(rows) * Matrix(form.right)
        self.assertEqual(product, Matrix.diag(*form.diagonal))
        self.assertEqual(form.diagonal, (2, 6, 12))

    def test_group_text(self):
        """Test printing and parsing abelian groups"""
        group = AbelianGroup.parse("Z + Z_2 + Z_4")
        self.assertEqual(group, AbelianGroup(rank=1, torsion=(2, 4)))
        self.assertEqual(str(group), "Z + Z_2 + Z_4")
        self.assertEqual(str(AbelianGroup()), "0")

    def test_sphere_homology(self):
        """Test H1 of the 2-tetrahedron sphere vanishes"""
        tri = double_tetrahedron()
        self.assertEqual(homology_h1(tri), AbelianGroup())
        self.assertEqual(homology_h1_z2(tri), 0)

    def test_one_tetrahedron_manifolds(self):
        """Test the closed 1-tetrahedron manifolds are S³, L(4,1) and L(5,2)"""
        found = one_tetrahedron_closed()
        self.assertTrue(found)
        self.assertTrue(all(tri.is_orientable() for tri in found))
        groups = {str(homology_h1(tri)) for tri in found}
        self.assertEqual(groups, {"0", "Z_4", "Z_5"})
        for tri in found:
            expected = 1 if str(homology_h1(tri)) == "Z_4" else 0
            self.assertEqual(homology_h1_z2(tri), expected)

    def test_fundamental_group_abelianizes_to_h1(self):
        """Test the presentation agrees with H1"""
        for tri in one_tetrahedron_closed() + [double_tetrahedron()]:
            self.assertEqual(fundamental_group(tri).abelianization(), homology_h1(tri))

    def test_presentation_simplification(self):
        """Test a generator appearing once is eliminated"""
        presentation = GroupPresentation(generators=2, relators=((1, 1, 2), (2, 2, 2, 2)))
        simplified = simplify_presentation(presentation)
        self.assertEqual(simplified.generators, 1)
        self.assertEqual(simplified.abelianization(), presentation.abelianization())


class TuraevViroTest(TestCase):
    """Test cases for Turaev-Viro invariants"""

    def test_relabelling_invariance(self):
        """Test values do not depend on labels"""
        rng = random.Random(11)
        for tri in one_tetrahedron_closed():
            for r in (3, 4, 5):
                a = turaev_viro(tri, r)
                b = turaev_viro(random_relabel(tri, rng), r)
                self.assertTrue(a.matches(b))

    def test_invariance_under_moves(self):
        """Test the 2-3 move preserves every level"""
        tri = double_tetrahedron()
        sites = legal_sites(tri, [MoveKind.PACHNER_23])
        self.assertTrue(sites)
        bigger = apply(tri, sites[0])
        for a, b in zip(turaev_viro_vector(tri, (3, 4, 5)), turaev_viro_vector(bigger, (3, 4, 5))):
            self.assertAlmostEqual(a.value, b.value, delta=1e-9)

    def test_level_range(self):
        """Test levels outside 3..8 are refused"""
        with self.assertRaises(UnsupportedSizeError):
            turaev_viro(double_tetrahedron(), 9)
        with self.assertRaises(UnsupportedSizeError):
            turaev_viro(double_tetrahedron(), 2)

    def test_separates_golden_manifolds_sharing_homology(self):
        """Test levels 3 to 7 tell apart the census manifolds whose H1 agree"""
        by_homology = {}
        for manifold in golden.GOLDEN_MANIFOLDS:
            by_homology.setdefault(manifold.homology, []).append(manifold)
        shared = [group for group in by_homology.values() if len(group) > 1]
        self.assertTrue(shared)
        for group in shared:
            vectors = [turaev_viro_vector(construct(m.members[0]), range(3, 8)) for m in group]
            for (i, a), (j, b) in combinations(enumerate(vectors), 2):
                separated = any(not x.matches(y) for x, y in zip(a, b))
                self.assertTrue(separated, f"{group[i].label} and {group[j].label}")


class MovesTest(TestCase):
    """Test cases for elementary moves"""

    def setUp(self):
        """Set up test data"""
        self.samples = [double_tetrahedron()] + one_tetrahedron_closed()[:4]

    def test_size_changes_and_invariants(self):
        """Test every legal move changes the size as stated and keeps H1"""
        for tri in self.samples:
            h1 = homology_h1(tri)
            for site in legal_sites(tri):
                result = apply(tri, site)
                self.assertEqual(result.size, tri.size + SIZE_CHANGE[site.kind], str(site))
                self.assertTrue(result.validity().closed_manifold, str(site))
                self.assertEqual(homology_h1(result), h1, str(site))

    def test_random_move_walks(self):
        """Test random legal moves from census triangulations change the size as stated and keep H1"""
        rng = random.Random(29)
        applied = 0
        for name in ('B[T6^2|-1,1|1,0]', 'B[K6^1|1,0|0,1]', 'H[~T6^4]', 'B[T7|1,1|1,0]'):
            tri = construct(name)
            h1 = homology_h1(tri)
            ceiling = tri.size + 2
            for _ in range(125):
                sites = legal_sites(tri)
                bounded = [s for s in sites if SIZE_CHANGE[s.kind] <= 0]
                if tri.size >= ceiling and bounded:
                    sites = bounded
                self.assertTrue(sites, name)
                site = rng.choice(sites)
                result = apply(tri, site)
                self.assertEqual(result.size, tri.size + SIZE_CHANGE[site.kind], f"{name} {site}")
                self.assertTrue(result.is_closed_manifold(), f"{name} {site}")
                self.assertEqual(homology_h1(result), h1, f"{name} {site}")
                tri = result
                applied += 1
        self.assertGreaterEqual(applied, 500)

    def test_two_three_then_three_two(self):
        """Test a 3-2 move undoes a 2-3 move up to isomorphism"""
        tri = double_tetrahedron()
        bigger = apply(tri, legal_sites(tri, [MoveKind.PACHNER_23])[0])
        back = [apply(bigger, s) for s in legal_sites(bigger, [MoveKind.PACHNER_32])]
        self.assertTrue(any(is_isomorphic(b, tri) for b in back))

    def test_illegal_move(self):
        """Test a 3-2 move around a degree-2 edge is refused"""
        with self.assertRaises(IllegalMoveError):
            apply(double_tetrahedron(), MoveSite(MoveKind.PACHNER_32, 0))

    def test_site_text(self):
        """Test move sites print and parse"""
        site = MoveSite(MoveKind.FOUR_FOUR, 3, 1)
        self.assertEqual(str(site), "4-4:1 3")
        self.assertEqual(MoveSite.parse("4-4:1 3"), site)
        with self.assertRaises(ParseError):
            MoveSite.parse("5-5 1")

    def test_simplify_returns_to_two(self):
        """Test simplify undoes a 2-3 move"""
        tri = double_tetrahedron()
        bigger = apply(tri, legal_sites(tri, [MoveKind.PACHNER_23])[0])
        self.assertLessEqual(simplify(bigger).size, 2)

    def test_simplify_never_grows(self):
        """Test simplify never increases the size and keeps H1 after random 2-3 moves"""
        rng = random.Random(11)
        start = double_tetrahedron()
        h1 = homology_h1(start)
        for _ in range(6):
            tri = random_relabel(start, rng)
            for _ in range(rng.randint(1, 3)):
                tri = apply(tri, rng.choice(legal_sites(tri, [MoveKind.PACHNER_23])))
            simplified = simplify(tri, height=1, max_states=2000, seed=rng.randint(0, 1000))
            self.assertLessEqual(simplified.size, tri.size)
            self.assertEqual(homology_h1(simplified), h1)
        for tri in one_tetrahedron_closed():
            self.assertEqual(simplify(tri, seed=3).size, 1)

    def test_simplify_is_idempotent(self):
        """Test simplifying a simplified triangulation gives the same triangulation"""
        tri = double_tetrahedron()
        for site in legal_sites(tri, [MoveKind.PACHNER_23])[:3]:
            bigger = apply(tri, site)
            once = simplify(bigger, height=1, max_states=2000, seed=7)
            twice = simplify(once, height=1, max_states=2000, seed=7)
            self.assertEqual(signature(twice), signature(once))

    def test_simplify_seed_is_deterministic(self):
        """Test the same seed gives the same simplified triangulation"""
        tri = construct('B[T6^2|-1,1|1,0]')
        bigger = apply(tri, legal_sites(tri, [MoveKind.PACHNER_23])[0])
        first = simplify(bigger, height=1, max_states=3000, seed=42)
        second = simplify(bigger, height=1, max_states=3000, seed=42)
        self.assertEqual(signature(first), signature(second))
        self.assertLessEqual(first.size, bigger.size)

    def test_move_connect_relabelling(self):
        """Test relabellings connect with an empty path"""
        tri = double_tetrahedron()
        a = apply(tri, legal_sites(tri, [MoveKind.PACHNER_23])[0])
        b = random_relabel(a, random.Random(5))
        self.assertEqual(move_connect(a, b), [])

    def test_move_connect(self):
        """Test paths are found and replay between different triangulations of one census manifold"""
        starts = {
            6: ('B[T6^2|-1,1|1,0]', 'B[K6^1|1,0|0,1]', 'H[~T6^1]', 'E[6,1]'),
            7: ('B[T7|1,1|1,0]', 'B[T7|-1,-1|-1,0]'),
        }
        for n, names in starts.items():
            connected = 0
            for name in names:
                a = construct(name)
                self.assertEqual(a.size, n)
                partner = same_size_neighbour(a)
                if partner is None:
                    continue
                self.assertFalse(is_isomorphic(a, partner), name)
                path = move_connect(a, partner, height=1, max_states=5000)
                self.assertIsNotNone(path, name)
                self.assertTrue(path, name)
                self.assertTrue(is_isomorphic(apply_path(a, path), partner), name)
                connected += 1
            self.assertGreater(connected, 0, f"n={n}")


def same_size_neighbour(tri):
    """A triangulation of the same size, not isomorphic to ``tri``, one 4-4 move or a 2-3 and 3-2 pair away."""
    for site in legal_sites(tri, [MoveKind.FOUR_FOUR]):
        other = apply(tri, site)
        if not is_isomorphic(other, tri):
            return other
    for up in legal_sites(tri, [MoveKind.PACHNER_23]):
        bigger = apply(tri, up)
        for down in legal_sites(bigger, [MoveKind.PACHNER_32]):
            other = apply(bigger, down)
            if not is_isomorphic(other, tri):
                return other
    return None


def apply_path(tri, path):
    for site in path:
        tri = apply(tri, site)
    return tri


def _extreme_rays_by_brute_force(tri):
    """Extreme rays as one-dimensional solution spaces of the equations plus coordinate zeros."""
    equations = matching_equations(tri).tolist()
    dimension = 7 * tri.size
    rays = set()
    for size in range(dimension - 1, -1, -1):
        for zeros in combinations(range(dimension), size):
            rows = equations + [[1 if i == z else 0 for i in range(dimension)] for z in zeros]
            basis = Matrix(rows).nullspace() if rows else Matrix.eye(dimension).columnspace()
            if len(basis) != 1:
                continue
            v = list(basis[0])
            if all(x <= 0 for x in v):
                v = [-x for x in v]
            if any(x < 0 for x in v):
                continue
            denominators = 1
            for x in v:
                denominators = denominators * x.q // gcd(denominators, x.q)
            ints = [int(x * denominators) for x in v]
            g = 0
            for x in ints:
                g = gcd(g, x)
            rays.add(tuple(x // g for x in ints))
    return rays


class NormalSurfaceTest(TestCase):
    """Test cases for vertex normal surfaces"""

    def test_matches_brute_force_on_one_tetrahedron(self):
        """Test enumeration equals the admissible extreme rays found by brute force"""
        for tri in one_tetrahedron_closed():
            expected = sorted(r for r in _extreme_rays_by_brute_force(tri) if is_admissible(r))
            self.assertEqual(vertex_normal_surfaces(tri), expected)
            self.assertEqual(vertex_normal_surfaces(tri, filter_during=False), expected)

    def test_vertex_links_present(self):
        """Test every vertex link is a vertex normal surface and a sphere"""
        tri = double_tetrahedron()
        surfaces = vertex_normal_surfaces(tri)
        for v in range(tri.skeleton.num_vertices):
            link = vertex_link_vector(tri, v)
            self.assertIn(link, surfaces)
            info = classify_surface(tri, link)
            self.assertEqual(info.kind, SurfaceKind.SPHERE)
            self.assertTrue(info.vertex_linking)
            self.assertTrue(info.orientable)

    def test_euler_characteristic_agrees(self):
        """Test the disc-complex Euler characteristic equals the linear formula"""
        for tri in [double_tetrahedron()] + one_tetrahedron_closed():
            for vector in vertex_normal_surfaces(tri):
                self.assertEqual(classify_surface(tri, vector).euler_characteristic, euler_characteristic(tri, vector))

    def test_matching_equations_vanish(self):
        """Test vertex surfaces satisfy every matching equation"""
        tri = double_tetrahedron()
        m = matching_equations(tri)
        for vector in vertex_normal_surfaces(tri):
            self.assertFalse((m @ vector).any())

    def test_orientable_never_not_irreducible(self):
        """Test orientable triangulations are never declared reducible by projective planes"""
        for tri in [double_tetrahedron()] + one_tetrahedron_closed():
            self.assertNotEqual(p2_verdict(tri), P2Verdict.NOT_IRREDUCIBLE)

    def test_inadmissible_vector_rejected(self):
        """Test two quadrilateral types in one tetrahedron are refused"""
        tri = double_tetrahedron()
        with self.assertRaises(ValueError):
            classify_surface(tri, (0, 0, 0, 0, 1, 1, 0) + (0,) * 7)

    def test_size_cap(self):
        """Test enumeration refuses triangulations above the cap"""
        with self.assertRaises(UnsupportedSizeError):
            vertex_normal_surfaces(double_tetrahedron(), max_tetrahedra=1)


class DetectorTest(TestCase):
    """Test cases for pillow and snapped 2-sphere detection"""

    def test_pillow(self):
        """Test two tetrahedra sharing three faces bound a pillow"""
        builder = TriangulationBuilder(2)
        for face in (1, 2, 3):
            builder.join(0, face, 1, IDENTITY)
        tri = builder.build()
        self.assertTrue(detect_pillow_2sphere(tri))
        self.assertFalse(detect_pillow_2sphere(double_tetrahedron()))

    def test_snapped(self):
        """Test two snapped tetrahedra sharing their opposite edge"""
        builder = TriangulationBuilder(2)
        for t in (0, 1):
            builder.join(t, 2, t, FOLD)
        builder.join(0, 0, 1, IDENTITY)
        builder.join(0, 1, 1, IDENTITY)
        tri = builder.build()
        self.assertTrue(detect_snapped_2sphere(tri))
        self.assertFalse(detect_snapped_2sphere(double_tetrahedron()))

    def test_relabelling_invariance(self):
        """Test detectors ignore labels"""
        rng = random.Random(2)
        builder = TriangulationBuilder(2)
        for face in (1, 2, 3):
            builder.join(0, face, 1, IDENTITY)
        pillow = builder.build()
        for _ in range(5):
            self.assertTrue(detect_pillow_2sphere(random_relabel(pillow, rng)))


class TriangulationApiTest(TestCase):
    """Test cases for the triangulation endpoints"""

    def post(self, path, payload):
        return self.client.post(f"/api/triangulations{path}", data=json.dumps(payload), content_type="application/json")

    def test_analyze(self):
        """Test analysis of the 2-tetrahedron sphere"""
        response = self.post("/analyze", {"gluing_table": double_tetrahedron().to_text()})
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual(data["homology"], "0")
        self.assertTrue(data["validity"]["closed_manifold"])
        self.assertEqual([v["r"] for v in data["turaev_viro"]], [3, 4, 5, 6, 7])

    def test_analyze_bad_table(self):
        """Test malformed tables give a 400 with details"""
        response = self.post("/analyze", {"gluing_table": "1:0123 bdy\n"})
        self.assertEqual(response.status_code, 400)
        self.assertFalse(response.json()["success"])

    def test_signature(self):
        """Test the signature endpoint"""
        tri = double_tetrahedron()
        response = self.post("/signature", {"gluing_table": tri.to_text()})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["signatures"], [signature(tri)])
