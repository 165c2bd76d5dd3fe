from itertools import combinations
from urllib.parse import quote
import random

from django.test import TestCase

from triangulations.homology import AbelianGroup, homology_h1
from triangulations.isosig import signature

from . import golden
from .exceptions import ConstructionError, NameParseError, NotWellBalancedError
from .families import (
    Fit,
    LazyFits,
    build_family,
    calibrate,
    compatible,
    construct,
    golden_bundle_signatures,
    golden_members,
    layered_surface_bundle,
    plugged_thin,
    resolve_bundle_block,
    resolve_jointly,
)
from .ibundles import (
    TWISTED_SIX_LAYOUTS,
    UNTWISTED_TORUS_LAYOUTS,
    Decomposition,
    StripLayout,
    boundary_components,
    build_candidates,
    enclosing_triangulation,
    strip_layouts,
)
from .lst import MobiusBand, layered_parameters, lst, meridian_weights, one_tetrahedron_solid_torus
from .naming import (
    KleinBottleBundle,
    SeifertFibredSpace,
    TorusBundle,
    format_family_name,
    name_manifold,
    names_equivalent,
    parse_family_name,
)
from .services import ConstructionService


class LayeredSolidTorusTest(TestCase):
    """Test cases for layering and layered solid tori"""

    def test_one_tetrahedron(self):
        """Test LST(1,2,-3) is a single tetrahedron with two boundary faces"""
        solid = lst(1, 2, -3)
        self.assertEqual(solid.size, 1)
        self.assertEqual(len(solid.boundary_faces()), 2)
        self.assertEqual(homology_h1(solid.triangulation), AbelianGroup(rank=1))

    def test_four_tetrahedra(self):
        """Test LST(3,7,-10) needs the chain of three layerings"""
        solid = lst(3, 7, -10)
        self.assertEqual(solid.size, 4)
        self.assertEqual(meridian_weights(solid), (3, 7, 10))

    def test_parameters_are_unordered(self):
        """Test permuted and negated parameters give the same triangulation"""
        a = lst(3, 7, -10).triangulation
        b = lst(-10, 3, 7).triangulation
        c = lst(-3, -7, 10).triangulation
        self.assertEqual(signature(a), signature(b))
        self.assertEqual(signature(a), signature(c))

    def test_mobius_marker(self):
        """Test LST(2,-1,-1) is the degenerate Mobius band"""
        solid = lst(2, -1, -1)
        self.assertIsInstance(solid, MobiusBand)
        self.assertEqual(solid.size, 0)
        self.assertEqual(solid.fold_index, 0)

    def test_invalid_parameters(self):
        """Test parameters that do not sum to zero or share a factor are rejected"""
        with self.assertRaises(ConstructionError):
            lst(1, 2, 3)
        with self.assertRaises(ConstructionError):
            lst(2, 4, -6)

    def test_layering_adds_one_tetrahedron(self):
        """Test each layering adds exactly one tetrahedron and keeps two boundary faces"""
        solid = one_tetrahedron_solid_torus()
        for index in (0, 1, 2, 1):
            layered = solid.layer(index)
            self.assertEqual(layered.size, solid.size + 1)
            self.assertEqual(len(layered.boundary_faces()), 2)
            solid = layered

    def test_random_layering_chains(self):
        """Test the parameter map of layering against meridian intersections on random chains"""
        rng = random.Random(20)
        for _ in range(100):
            solid = one_tetrahedron_solid_torus()
            for _ in range(rng.randint(1, 6)):
                index = rng.randrange(3)
                before = solid.params
                solid = solid.layer(index)
                others = [i for i in range(3) if i != index]
                expected = layered_parameters(before[others[0]], before[others[1]], before[index])
                self.assertEqual(
                    (solid.params[others[0]], solid.params[others[1]], solid.params[index]),
                    expected,
                )
            self.assertEqual(meridian_weights(solid), tuple(abs(p) for p in solid.params))


class DecompositionTest(TestCase):
    """Test cases for well-balanced decompositions and their enclosing triangulations"""

    def test_odd_quadrilateral_corners(self):
        """Test a vertex meeting one quadrilateral corner fails the first condition"""
        d = Decomposition()
        q = d.add_cell(4)
        d.pair(q, 0, q, 1)
        d.pair(q, 2, q, 3)
        with self.assertRaises(NotWellBalancedError) as ctx:
            enclosing_triangulation(d)
        self.assertEqual(ctx.exception.condition, 1)

    def test_quadrilateral_cycle(self):
        """Test a torus made of one quadrilateral fails the third condition"""
        d = Decomposition()
        q = d.add_cell(4)
        d.pair(q, 0, q, 2)
        d.pair(q, 1, q, 3)
        with self.assertRaises(NotWellBalancedError) as ctx:
            enclosing_triangulation(d)
        self.assertEqual(ctx.exception.condition, 3)

    def test_unpaired_side(self):
        """Test a side without a partner is reported"""
        d = Decomposition()
        q = d.add_cell(4)
        d.pair(q, 0, q, 2)
        with self.assertRaises(ConstructionError):
            enclosing_triangulation(d)

    def test_untwisted_torus_bundles(self):
        """Test untwisted six-cell torus layouts give two boundary tori of two triangles"""
        candidates = build_candidates(UNTWISTED_TORUS_LAYOUTS, twisted=False)
        self.assertTrue(candidates)
        for bundle in candidates:
            tri = bundle.triangulation
            self.assertEqual(tri.size, 6)
            components = boundary_components(tri)
            self.assertEqual(sorted(len(c) for c in components), [2, 2])

    def test_seven_cell_torus_bundles(self):
        """Test seven-cell strip layouts give seven tetrahedra and two boundary tori"""
        candidates = build_candidates(strip_layouts(3), twisted=False)
        self.assertTrue(candidates)
        for bundle in candidates:
            self.assertEqual(bundle.triangulation.size, 7)
            self.assertEqual(sorted(len(c) for c in boundary_components(bundle.triangulation)), [2, 2])
            self.assertEqual(homology_h1(bundle.triangulation), AbelianGroup(rank=2))

    def test_strip_layouts_close_up(self):
        """Test every strip layout pairs all sides into a surface of Euler characteristic 0"""
        layouts = list(strip_layouts(2))
        self.assertTrue(layouts)
        for layout in layouts[:50]:
            d = layout.decomposition()
            self.assertEqual(len(d.cells), 6)
            self.assertEqual(len(d.partner()), 20)
            self.assertEqual(d.euler_characteristic(), 0)

    def test_strip_layouts_reach_the_grids(self):
        """Test the six-cell strip layouts find every torus I-bundle the grid layouts find"""
        grids = {signature(b.triangulation) for b in build_candidates(UNTWISTED_TORUS_LAYOUTS, twisted=False)}
        strips = {signature(b.triangulation) for b in build_candidates(strip_layouts(2), twisted=False)}
        self.assertLessEqual(grids, strips)

    def test_klein_strip_layouts(self):
        """Test strip layouts with flipped pairings reach I-bundles over the Klein bottle"""
        groups = {homology_h1(b.triangulation) for b in build_candidates(strip_layouts(2, flips=True), twisted=False)}
        self.assertIn(AbelianGroup(rank=1, torsion=(2,)), groups)

    def test_strip_layout_links(self):
        """Test a strip layout walks each strip from one triangle of a pair to the other"""
        layout = StripLayout(lower=(0, 2, 1), upper=(0, 1, 2), lower_strips=((0,), (), (1,)),
                             upper_strips=(((1, True),), ((0, False),), ()))
        self.assertEqual(layout.quads, 2)
        self.assertEqual(layout.lower_links(), [(0, 0, 4, 1), (4, 3, 1, 0), (0, 1, 1, 2), (0, 2, 5, 1), (5, 3, 1, 1)])
        self.assertEqual(layout.upper_links(), [(2, 0, 5, 0), (5, 2, 3, 0), (2, 1, 4, 2), (4, 0, 3, 1), (2, 2, 3, 2)])
    def test_twisted_torus_bundles(self):
        """Test twisted six-cell layouts give one boundary torus of four triangles"""
        candidates = build_candidates(TWISTED_SIX_LAYOUTS, twisted=True)
        self.assertTrue(candidates)
        for bundle in candidates:
            self.assertEqual(len(boundary_components(bundle.triangulation)), 1)
            self.assertEqual(len(bundle.triangulation.boundary_faces()), 4)


class FamilyNameTest(TestCase):
    """Test cases for the family-name grammar and the manifold naming"""

    def test_golden_names_round_trip(self):
        """Test every golden name formats back to itself"""
        for manifold in golden.GOLDEN_MANIFOLDS:
            for text in manifold.members:
                self.assertEqual(format_family_name(parse_family_name(text)), text)

    def test_default_plugs(self):
        """Test omitted plugs default to the Mobius band"""
        name = parse_family_name('H[~T6^1|3,-1]')
        self.assertEqual(name.params, (3, -1, 2, -1))
        self.assertEqual(parse_family_name('K[~T5^2]').params, (2, -1, 2, -1))
        self.assertEqual(str(parse_family_name('H[~T6^3|2,-1|2,-1]')), 'H[~T6^3]')

    def test_lst_names(self):
        """Test layered solid torus names parse"""
        name = parse_family_name('LST(3,7,-10)')
        self.assertEqual(name.family, 'LST')
        self.assertEqual(name.params, (3, 7, -10))

    def test_rejected_names(self):
        """Test names outside the grammar are rejected"""
        for text in ('B[T8|1,0|0,1]', 'H[~T5^1]', 'K[~T6^1]', 'E[6,4]', 'LST(1,2)', 'garbage'):
            with self.assertRaises(NameParseError):
                parse_family_name(text)

    def test_bundle_name(self):
        """Test the seven-tetrahedron torus bundle name"""
        name = name_manifold(parse_family_name('B[T7|1,1|1,0]'))
        self.assertTrue(names_equivalent(name, TorusBundle(((2, 1), (1, 0)))))

    def test_seifert_names(self):
        """Test plugged bundles are named after normalising their fibres"""
        thin = name_manifold(parse_family_name('H[~T6^1|3,-1]'))
        self.assertEqual(thin.normalised(), SeifertFibredSpace('RP2', ((2, 1), (3, 1))))
        thick = name_manifold(parse_family_name('K[~T5^4|3,-1]'))
        self.assertEqual(thick.normalised(), SeifertFibredSpace('D', ((2, 1), (3, 1))))

    def test_klein_hypotheses(self):
        """Test Klein bottle bundle parameters outside the hypotheses are rejected"""
        with self.assertRaises(ConstructionError):
            name_manifold(parse_family_name('B[K6^1|1,1|0,1]'))

    def test_golden_groups_are_equivalent(self):
        """Test every census manifold's members get pairwise equivalent names"""
        for manifold in golden.GOLDEN_MANIFOLDS:
            names = [name_manifold(parse_family_name(text)) for text in manifold.members]
            for a, b in combinations(names, 2):
                self.assertTrue(names_equivalent(a, b), f"{manifold.label}: {a} vs {b}")

    def test_distinct_manifolds(self):
        """Test manifolds with colliding homology keep different names"""
        self.assertFalse(names_equivalent(
            SeifertFibredSpace('RP2', ((2, 1), (3, 1))),
            TorusBundle(((-1, 1), (1, 0))),
        ))
        self.assertFalse(names_equivalent(
            SeifertFibredSpace('D', ((2, 1), (3, 1))),
            TorusBundle(((2, 1), (1, 0))),
        ))
        self.assertFalse(names_equivalent(KleinBottleBundle(((1, 0), (0, 1))), TorusBundle(((0, 1), (1, 0)))))

    def test_family_frequencies(self):
        """Test the golden data reproduces the family frequency table"""
        table = golden.family_frequencies()
        self.assertEqual(table['B-T'], {6: 6, 7: 4})
        self.assertEqual(table['B-K'], {6: 8, 7: 0})
        self.assertEqual(table['H'], {6: 4, 7: 6})
        self.assertEqual(table['K'], {6: 4, 7: 7})
        self.assertEqual(table['E'], {6: 3, 7: 0})
        self.assertEqual(sum(len(m.members) for m in golden.GOLDEN_MANIFOLDS), 41)


class FamilyConstructionTest(TestCase):
    """Test cases for building the named families"""

    def assertGolden(self, text, size, homology):
        tri = construct(text)
        self.assertEqual(tri.size, size)
        self.assertTrue(tri.is_closed_manifold())
        self.assertFalse(tri.is_orientable())
        self.assertEqual(str(homology_h1(tri)), homology)

    def test_seven_tetrahedron_bundle(self):
        """Test B[T7|1,1|1,0] needs no extra layering"""
        self.assertGolden('B[T7|1,1|1,0]', 7, 'Z + Z_2')

    def test_layered_bundle(self):
        """Test B[T6^2|-1,1|2,-1] needs one layering"""
        self.assertGolden('B[T6^2|-1,1|2,-1]', 7, 'Z + Z_2')

    def test_plugged_thin(self):
        """Test the thin plugged bundle with two Mobius plugs and with one real plug"""
        self.assertGolden('H[~T6^1]', 6, 'Z + Z_4')
        self.assertGolden('H[~T6^1|3,-1]', 7, 'Z')

    def test_plugged_thick(self):
        """Test the thick plugged bundles"""
        self.assertGolden('K[~T5^1]', 6, 'Z + Z_4')
        self.assertGolden('K[~T5^3|3,-1]', 7, 'Z')
        self.assertGolden('K[~T5^4]', 6, 'Z + Z_2 + Z_2')

    def test_exceptional(self):
        """Test the three exceptional triangulations"""
        self.assertGolden('E[6,1]', 6, 'Z + Z_2 + Z_2')
        self.assertGolden('E[6,2]', 6, 'Z + Z_4')
        self.assertGolden('E[6,3]', 6, 'Z + Z')

    def test_non_invertible_bundle(self):
        """Test bundle parameters that are not a homeomorphism are rejected"""
        with self.assertRaises(ConstructionError):
            layered_surface_bundle('T7', 2, 0, 0, 1)

    def test_zero_plug(self):
        """Test a plug with p = 0 is rejected"""
        with self.assertRaises(ConstructionError):
            plugged_thin('~T6^1', 0, 1)

    def test_lst_by_name(self):
        """Test LST names build bounded triangulations and the Mobius marker"""
        self.assertEqual(build_family(parse_family_name('LST(3,7,-10)')).size, 4)
        self.assertIsInstance(build_family(parse_family_name('LST(2,-1,-1)')), MobiusBand)

    def test_all_golden_members(self):
        """Test all 41 census triangulations build with the published size and homology"""
        for manifold in golden.GOLDEN_MANIFOLDS:
            for text in manifold.members:
                with self.subTest(name=text):
                    self.assertGolden(text, manifold.tetrahedra, manifold.homology)


class GoldenCoincidenceTest(TestCase):
    """Test cases for the coincidences between golden names"""

    def test_six_tetrahedron_classes(self):
        """Test the 25 six-tetrahedron names give 24 triangulations"""
        names = golden.members_by_size()[6]
        signatures = {signature(construct(text)) for text in names}
        self.assertEqual(len(names), 25)
        self.assertEqual(len(signatures), golden.CENSUS_COUNTS[6][0])

    def test_isomorphic_bundles(self):
        """Test the torus bundle and Klein bottle bundle that coincide"""
        for a, b in golden.ISOMORPHIC_NAMES:
            self.assertEqual(signature(construct(a)), signature(construct(b)))

    def test_seven_tetrahedron_classes(self):
        """Test the seven-tetrahedron names are pairwise non-isomorphic"""
        names = golden.members_by_size()[7]
        self.assertEqual(len({signature(construct(text)) for text in names}), golden.CENSUS_COUNTS[7][0])

    def test_plug_symmetry(self):
        """Test swapping the two plugs gives an isomorphic triangulation"""
        for text in ('H[~T6^1|3,-1]', 'H[~T6^4|3,-1]', 'K[~T5^2|3,-2]'):
            name = parse_family_name(text)
            p1, q1, p2, q2 = name.params
            swapped = format_family_name(type(name)(name.family, name.kind, (p2, q2, p1, q1)))
            self.assertEqual(signature(construct(text)), signature(construct(swapped)))

    def test_seven_tetrahedron_block(self):
        """Test the T7 block is a seven-cell I-bundle and its bundles differ from the T6^2 ones"""
        self.assertEqual(resolve_bundle_block('T7').triangulation.size, 7)
        sevens = {signature(construct(text)) for text in ('B[T7|1,1|1,0]', 'B[T7|-1,-1|-1,0]')}
        layered = {signature(construct(text)) for text in ('B[T6^2|-1,1|2,-1]', 'B[T6^2|0,-1|-1,2]')}
        self.assertEqual(len(sevens), 2)
        self.assertFalse(sevens & layered)

    def test_klein_blocks_differ(self):
        """Test the two Klein bottle blocks give different triangulations for the same parameters"""
        for member in golden_members('B', 'K6^1'):
            params = ','.join(map(str, member.name.params[:2])) + '|' + ','.join(map(str, member.name.params[2:]))
            with self.subTest(params=params):
                self.assertNotEqual(
                    signature(construct(f"B[K6^1|{params}]")),
                    signature(construct(f"B[K6^2|{params}]")),
                )

    def test_exceptional_are_not_bundles(self):
        """Test the exceptional triangulations avoid every bundle and plugged member"""
        bundles = golden_bundle_signatures()
        plugged = {
            signature(construct(text))
            for text in golden.members_by_size()[6]
            if text[0] in 'HK'
        }
        exceptional = [signature(construct(f"E[6,{i}]")) for i in (1, 2, 3)]
        self.assertEqual(len(set(exceptional)), 3)
        for sig in exceptional:
            self.assertNotIn(sig, bundles)
            self.assertNotIn(sig, plugged)


class CalibrationTest(TestCase):
    """Test cases for settling the blocks behind the family kinds"""

    def setUp(self):
        self.torus = Fit('torus', {'B[T6^1|0,1|1,0]': 'a', 'B[T6^1|1,0|1,-1]': 'b'})
        self.twin = Fit('twin', {'B[K6^2|0,-1|-1,0]': 'a', 'B[K6^2|1,0|0,1]': 'c'})
        self.apart = Fit('apart', {'B[K6^2|0,-1|-1,0]': 'd', 'B[K6^2|1,0|0,1]': 'c'})
        self.clash = Fit('clash', {'B[K6^2|0,-1|-1,0]': 'a', 'B[K6^2|1,0|0,1]': 'b'})

    def test_coincidence_required(self):
        """Test the published coincidence must hold and other names must differ"""
        self.assertTrue(compatible(self.twin, [self.torus]))
        self.assertFalse(compatible(self.apart, [self.torus]))
        self.assertFalse(compatible(self.clash, [self.torus]))

    def test_joint_resolution_backtracks(self):
        """Test an earlier kind is revisited when a later kind has no compatible fit"""
        other = Fit('other', {'B[T6^1|0,1|1,0]': 'd', 'B[T6^1|1,0|1,-1]': 'e'})
        chosen = resolve_jointly([
            ('T6^1', LazyFits(iter([self.torus, other]))),
            ('K6^2', LazyFits(iter([self.apart]))),
        ])
        self.assertIs(chosen['T6^1'], other)
        self.assertIs(chosen['K6^2'], self.apart)

    def test_joint_resolution_fails(self):
        """Test incompatible kinds raise instead of settling for a partial match"""
        with self.assertRaises(ConstructionError):
            resolve_jointly([
                ('T6^1', LazyFits(iter([self.torus]))),
                ('K6^2', LazyFits(iter([self.clash]))),
            ])

    def test_calibration_without_candidates(self):
        """Test calibration raises when no candidate builds the members"""
        with self.assertRaises(ConstructionError):
            calibrate('B[T7]', iter([]), lambda block, member: None, golden_members('B', 'T7'))

    def test_lazy_fits_replay(self):
        """Test a pool can be walked again after its source is spent"""
        pool = LazyFits(iter([self.torus, self.twin]))
        self.assertEqual([fit.candidate for fit in pool], ['torus', 'twin'])
        self.assertEqual([fit.candidate for fit in pool], ['torus', 'twin'])


class ConstructionServiceTest(TestCase):
    """Test cases for the construction service"""

    def setUp(self):
        self.service = ConstructionService()

    def test_build_closed(self):
        """Test a closed member reports homology and its manifold"""
        report = self.service.build('B[T7|1,1|1,0]')
        self.assertEqual(report.size, 7)
        self.assertEqual(str(report.homology), 'Z + Z_2')
        self.assertIsNotNone(report.manifold)

    def test_build_bounded(self):
        """Test a layered solid torus is reported without closed-census analyses"""
        report = self.service.build('LST(3,7,-10)')
        self.assertEqual(report.size, 4)
        self.assertIsNone(report.homology)
        self.assertIn("has boundary; closed-census analyses skipped", report.notes)

    def test_identify(self):
        """Test a golden member is identified by signature"""
        sig, names, manifold = self.service.identify(construct('H[~T6^4]'))
        self.assertIn('H[~T6^4]', names)
        self.assertEqual(manifold.homology, 'Z + Z_2 + Z_2')


class ConstructionApiTest(TestCase):
    """Test cases for the construction endpoints"""

    def get(self, name):
        return self.client.get(f"/api/constructions/{quote(name, safe='')}")

    def test_construct(self):
        """Test building a layered solid torus by name"""
        response = self.get('LST(3,7,-10)')
        self.assertEqual(response.status_code, 200)
        data = response.json()
        self.assertEqual(data["size"], 4)
        self.assertFalse(data["closed"])

    def test_construct_bundle(self):
        """Test building a closed member reports its homology"""
        response = self.get('B[T7|1,1|1,0]')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["homology"], 'Z + Z_2')

    def test_bad_name(self):
        """Test an unparseable name gives a 400"""
        response = self.get('B[nope]')
        self.assertEqual(response.status_code, 400)
        self.assertFalse(response.json()["success"])

    def test_golden(self):
        """Test the golden listing has eight manifolds"""
        response = self.client.get("/api/constructions/golden")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()), 8)
