import random
import unittest
from fractions import Fraction

from hypothesis import given, settings

from arrangement import build_psi_arrangement
from exact import MPoly, coordinate_names
from harness.decorators import number
from logderiv import (AuditInconclusive, Derivation, Free, InvalidOrdering, NotFree, SaitoFailure,
                      addition_deletion_audit, build_theta_k, c_geq, coefficient_matrix, decide_freeness,
                      e_lt, euler_derivation, exponents_formula, is_logarithmic, saito_scalar, saito_verify,
                      theta_basis, valley_path_audit)
from tests.generators import random_weo_graph
from tests.strategies import weighted_graphs
from wgraph import ChordlessCycle, GraphError, IncomparableEdge, Ordering, ValleyPath, WeightedGraph, check_obstruction

NAMES = coordinate_names(2)


def var(name: str) -> MPoly:
    return MPoly.variable(NAMES, NAMES.index(name))


class TestDerivation(unittest.TestCase):

    @number("4.1")
    def test_euler(self):
        theta = euler_derivation(1)
        self.assertEqual(theta.coeffs, (MPoly.variable(("z", "x1"), 0), MPoly.variable(("z", "x1"), 1)))
        self.assertEqual(theta.degree, 1)
        e2 = euler_derivation(2)
        form = var("x1") - var("x2")
        self.assertEqual(e2.apply(form), form)
        q = form * var("z") * (var("x2") - 3 * var("z"))
        self.assertEqual(e2.apply(q), 3 * q)
        with self.assertRaises(ValueError):
            euler_derivation(0)

    @number("4.2")
    def test_degree_and_display(self):
        d = Derivation(NAMES, (MPoly.zero(NAMES), var("x1") * var("z"), var("x2") ** 2))
        self.assertEqual(d.degree, 2)
        self.assertEqual(d.display(), "(z*x1)*dx1 + (x2^2)*dx2")
        self.assertEqual(d.as_dict(), {"dz": "0", "dx1": "z*x1", "dx2": "x2^2"})
        mixed = Derivation(NAMES, (var("z"), var("x1") ** 2, MPoly.zero(NAMES)))
        self.assertIsNone(mixed.degree)
        self.assertEqual(Derivation.partial(NAMES, 1).degree, 0)

    @number("4.3")
    def test_restrict_z0(self):
        d = Derivation(NAMES, (var("z"), var("x1") * (var("x1") - var("z")), var("x2")))
        restricted = d.restrict_z0()
        self.assertEqual(restricted.names, ("x1", "x2"))
        self.assertEqual(restricted.display(), "(x1^2)*dx1 + (x2)*dx2")


class TestThetaBasis(unittest.TestCase):

    def setUp(self) -> None:
        self.example = WeightedGraph.build(2, [(1, 2)], [[0], [0, 1]])
        self.path = WeightedGraph.build(3, [(1, 2), (2, 3)], [[], [], []])

    @number("4.4")
    def test_c_geq_and_e_lt(self):
        o = Ordering((1, 2, 3))
        self.assertEqual(c_geq(self.path, o, 1), {1, 2, 3})
        self.assertEqual(c_geq(self.path, o, 2), {2, 3})
        self.assertEqual(e_lt(self.path, o, 3), {2})
        other = Ordering((2, 1, 3))
        self.assertEqual(c_geq(self.path, other, 2), {2})
        self.assertEqual(e_lt(self.path, other, 3), {1})

    @number("4.5")
    def test_theta_k(self):
        o = Ordering((2, 1))
        first = build_theta_k(self.example, o, 1)
        self.assertEqual(first.coeffs[2], var("x2") * (var("x2") - var("z")))
        self.assertEqual(first.coeffs[1], var("x1") * (var("x1") - var("z")))
        second = build_theta_k(self.example, o, 2)
        self.assertEqual(second.coeffs[1], (var("x2") - var("x1")) * var("x1"))
        self.assertTrue(second.coeffs[2].is_zero())
        with self.assertRaises(InvalidOrdering):
            build_theta_k(self.example, Ordering((1, 2)), 1)

    @number("4.6")
    def test_basis_is_logarithmic_and_triangular(self):
        a = build_psi_arrangement(self.example)
        ders, rows = theta_basis(self.example, Ordering((2, 1)))
        self.assertEqual(rows, (0, 2, 1))
        for d in ders:
            self.assertTrue(is_logarithmic(d, a))
        matrix = coefficient_matrix(ders, rows)
        self.assertTrue(all(matrix[r][c].is_zero() for r in range(3) for c in range(r + 1, 3)))
        self.assertEqual(saito_verify(a, ders, rows), -1)
        self.assertEqual(saito_verify(a, ders), -1)

    @number("4.7")
    def test_exponents(self):
        self.assertEqual(exponents_formula(self.example, Ordering((2, 1))), (1, 2, 2))
        nested = WeightedGraph.build(3, [(1, 2), (1, 3), (2, 3)], [[0], [0, 1], [0, 1, 2]])
        self.assertEqual(exponents_formula(nested, Ordering((3, 2, 1))), (1, 3, 3, 3))

    @number("4.8")
    def test_single_vertex(self):
        g = WeightedGraph.build(1, [], [[]])
        result = decide_freeness(g)
        self.assertIsInstance(result, Free)
        self.assertEqual(result.exponents, (0, 1))
        self.assertEqual(result.saito_scalar, 1)


class TestSaito(unittest.TestCase):

    def setUp(self) -> None:
        self.g = WeightedGraph.build(2, [(1, 2)], [[0], [0, 1]])
        self.a = build_psi_arrangement(self.g)
        self.ders, self.rows = theta_basis(self.g, Ordering((2, 1)))

    @number("4.9")
    def test_not_logarithmic(self):
        check = is_logarithmic(Derivation.partial(NAMES, 1), self.a)
        self.assertFalse(check)
        self.assertEqual(check.report, (True, False, False, True, True))

    @number("4.10")
    def test_failures(self):
        self.assertIsInstance(saito_verify(self.a, self.ders[:2]), SaitoFailure)
        swapped = [self.ders[0], self.ders[1], Derivation.partial(NAMES, 1)]
        self.assertIsInstance(saito_verify(self.a, swapped), SaitoFailure)
        doubled = [self.ders[0], self.ders[1], self.ders[1]]
        self.assertIsInstance(saito_verify(self.a, doubled, self.rows), SaitoFailure)

    @number("4.11")
    def test_scalar_with_multiplicities(self):
        ones = saito_scalar(self.a, [1] * len(self.a), self.ders, self.rows)
        self.assertEqual(ones, Fraction(-1))


class TestDecision(unittest.TestCase):

    @number("4.12")
    def test_not_free_certificates(self):
        cycle = WeightedGraph.build(4, [(1, 2), (2, 3), (3, 4), (1, 4)], [[]] * 4)
        self.assertEqual(decide_freeness(cycle), NotFree(ChordlessCycle((1, 2, 3, 4))))
        incomparable = WeightedGraph.build(2, [(1, 2)], [[0], [1]])
        self.assertEqual(decide_freeness(incomparable), NotFree(IncomparableEdge(1, 2)))

    @number("4.13")
    def test_valley_audit(self):
        valley = WeightedGraph.build(3, [(1, 2), (2, 3)], [[0, 1], [0], [0, 1]])
        result = decide_freeness(valley)
        self.assertIsInstance(result, NotFree)
        self.assertEqual(result.obstruction, ValleyPath((1, 2, 3)))
        self.assertEqual(result.audit.exp_deleted, (1, 2, 2, 2))
        self.assertEqual(result.audit.exp_restricted, (1, 2, 3))
        self.assertFalse(result.audit.subset_holds)
        self.assertTrue(result.audit.refutes_freeness)

    @number("4.14")
    def test_long_valley_audit(self):
        g = WeightedGraph.build(4, [(1, 2), (2, 3), (3, 4)], [[0, 1], [0], [0], [0, 1]])
        audit = valley_path_audit(g, (1, 2, 3, 4))
        self.assertEqual(audit.edge, (2, 3))
        self.assertFalse(audit.subset_holds)
        with self.assertRaises(GraphError):
            valley_path_audit(g, (1, 2))

    @number("4.15")
    def test_audit_free_edge(self):
        g = WeightedGraph.build(2, [(1, 2)], [[0], [0, 1]])
        audit = addition_deletion_audit(g, (2, 1))
        self.assertEqual(audit.edge, (1, 2))
        self.assertEqual(audit.exp_deleted, (1, 1, 2))
        self.assertEqual(audit.exp_restricted, (1, 2))
        self.assertTrue(audit.subset_holds)
        with self.assertRaises(GraphError):
            addition_deletion_audit(WeightedGraph.build(2, [], [[], []]), (1, 2))

    @number("4.16")
    def test_audit_inconclusive(self):
        g = WeightedGraph.build(3, [(1, 2), (2, 3)], [[1], [], [0]])
        with self.assertRaises(AuditInconclusive):
            addition_deletion_audit(g, (2, 3))
        self.assertEqual(decide_freeness(g), NotFree(ValleyPath((1, 2, 3))))

    @number("4.17")
    def test_random_weo_graphs_are_free(self):
        rng = random.Random(11)
        for _ in range(25):
            g, o = random_weo_graph(rng, max_vertices=5)
            result = decide_freeness(g)
            self.assertIsInstance(result, Free)
            self.assertEqual(result.exponents, exponents_formula(g, o))
            self.assertEqual(sum(result.exponents), len(build_psi_arrangement(g)))

    @number("4.18")
    @given(weighted_graphs(max_vertices=4))
    @settings(max_examples=60, deadline=None)
    def test_certificates_verify(self, g):
        result = decide_freeness(g)
        if isinstance(result, NotFree):
            self.assertTrue(check_obstruction(g, result.obstruction))
        else:
            ders, rows = theta_basis(g, result.ordering)
            self.assertNotIsInstance(saito_verify(build_psi_arrangement(g), ders, rows), SaitoFailure)
