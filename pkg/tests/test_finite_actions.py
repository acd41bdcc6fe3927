import random
import unittest
from unittest import mock

try:
    from finite_forge import domain, finite_actions
    from finite_forge.repositories import PreconditionError, SetupInvariantError
except ModuleNotFoundError:
    import domain
    import finite_actions
    from repositories import PreconditionError, SetupInvariantError

SWAP = (1, 0, 2, 3)


def s3():
    return finite_actions.make_action(3, [(1, 0, 2), (1, 2, 0)])


def two_orbit_setup(**changes):
    fields = dict(
        instances=2,
        codes=4,
        points=4,
        f=(0, 2),
        g=(0, 1, 2, 3),
        classes=(frozenset({0, 1}), frozenset({2}), frozenset({3})),
    )
    fields.update(changes)
    return domain.ReductionSetup(**fields)


class TestPermutations(unittest.TestCase):
    def test_compose_applies_right_first(self):
        p, q = (1, 2, 0), (1, 0, 2)
        self.assertEqual(finite_actions.compose(p, q), (2, 1, 0))
        self.assertEqual(finite_actions.compose(p, finite_actions.inverse(p)), (0, 1, 2))

    def test_bad_generator(self):
        with self.assertRaises(PreconditionError):
            finite_actions.make_action(3, [(0, 0, 1)])


class TestGroups(unittest.TestCase):
    def test_symmetric_group(self):
        a = s3()
        self.assertEqual(len(finite_actions.group_elements(a.degree, a.generators)), 6)
        self.assertEqual(finite_actions.orbit(a, 0), [0, 1, 2])

    def test_stabilizer(self):
        sigma = finite_actions.stabilizer(s3(), 0)
        self.assertEqual(sigma.order, 2)
        for gen in sigma.generators:
            self.assertEqual(gen[0], 0)

    def test_trivial_group(self):
        a = finite_actions.make_action(3, [])
        self.assertEqual(finite_actions.orbit(a, 1), [1])
        sigma = finite_actions.stabilizer(a, 1)
        self.assertEqual((sigma.order, sigma.generators), (1, ()))

    def test_orbit_stabilizer_mismatch_is_named(self):
        a = s3()
        real = finite_actions.group_elements

        def padded(degree, generators):
            found = real(degree, generators)
            return found | {(0, 0, 0)} if tuple(generators) == a.generators else found

        with mock.patch.object(finite_actions, "group_elements", padded):
            with self.assertRaises(SetupInvariantError) as caught:
                finite_actions.stabilizer(a, 0)
        self.assertEqual(caught.exception.hypothesis, "orbit-stabilizer")

    def test_point_outside(self):
        with self.assertRaises(PreconditionError):
            finite_actions.orbit(s3(), 3)

    def test_coset_selector(self):
        a = s3()
        sigma = finite_actions.stabilizer(a, 0)
        selector = finite_actions.coset_selector(a, sigma)
        self.assertEqual(len(selector.transversal), 3)
        for y, rep in selector.choice.items():
            self.assertEqual(selector.choice[rep], rep)
            self.assertLessEqual(rep, y)

    def test_selector_needs_a_subgroup(self):
        cyclic = finite_actions.make_action(3, [(1, 2, 0)])
        h = domain.Subgroup(degree=3, generators=((1, 0, 2),), order=2)
        with self.assertRaises(PreconditionError):
            finite_actions.coset_selector(cyclic, h)

    def test_stabilizers_are_conjugation_covariant(self):
        a = s3()
        for y in finite_actions.group_elements(a.degree, a.generators):
            for w in range(3):
                self.assertTrue(finite_actions.conjugation_covariant(a, y, w))


class TestSaturation(unittest.TestCase):
    def setUp(self):
        self.action = finite_actions.make_action(4, [SWAP])

    def test_uniqueness_set_is_the_saturation(self):
        setup = two_orbit_setup()
        self.assertEqual(finite_actions.saturation_by_uniqueness(setup, self.action), frozenset({0, 1, 2}))
        self.assertEqual(finite_actions.direct_saturation(setup), frozenset({0, 1, 2}))

    def test_hypotheses_are_named(self):
        cases = (
            (dict(f=(0, 0)), "f-injective"),
            (dict(classes=(frozenset({0, 1}), frozenset({2}))), "partition"),
            (dict(f=(0, 1)), "f-images-inequivalent"),
            (dict(classes=tuple(frozenset({z}) for z in range(4))), "g-reduces-E"),
        )
        for changes, hypothesis in cases:
            with self.subTest(hypothesis=hypothesis):
                with self.assertRaises(SetupInvariantError) as caught:
                    finite_actions.check_setup(two_orbit_setup(**changes), self.action)
                self.assertEqual(caught.exception.hypothesis, hypothesis)

    def test_corrupted_setup_drifts(self):
        broken = finite_actions.corrupt_setup(two_orbit_setup())
        self.assertEqual(broken.f, (0, 2, 1))
        self.assertEqual(
            finite_actions.saturation_by_uniqueness(broken, self.action, check=False), frozenset({2})
        )
        self.assertEqual(finite_actions.direct_saturation(broken), frozenset({0, 1, 2}))
        with self.assertRaises(SetupInvariantError):
            finite_actions.saturation_by_uniqueness(broken, self.action)

    def test_corruption_uses_any_class_with_a_spare_code(self):
        broken = finite_actions.corrupt_setup(two_orbit_setup(f=(2, 0)))
        self.assertEqual(broken.f, (2, 0, 1))
        self.assertEqual(
            finite_actions.saturation_by_uniqueness(broken, self.action, check=False), frozenset({2})
        )

    def test_nothing_to_corrupt(self):
        self.assertIsNone(finite_actions.corrupt_setup(two_orbit_setup(f=(2, 3))))

    def test_generated_setups_can_always_be_corrupted(self):
        for seed in range(20):
            rng = random.Random(seed)
            for _ in range(10):
                setup, a = finite_actions.corruptible_setup(rng)
                with self.subTest(seed=seed, setup=setup):
                    broken = finite_actions.corrupt_setup(setup)
                    self.assertIsNotNone(broken)
                    self.assertNotEqual(
                        finite_actions.saturation_by_uniqueness(broken, a, check=False),
                        finite_actions.direct_saturation(broken),
                    )

    def test_with_stabilizers(self):
        a = finite_actions.with_stabilizers(two_orbit_setup(), self.action)
        self.assertEqual(a.parameters, {0: (), 1: (SWAP,)})

    def test_random_setups(self):
        rng = random.Random(11)
        for _ in range(50):
            setup, a = finite_actions.random_setup(rng)
            finite_actions.check_setup(setup, a)
            self.assertEqual(
                finite_actions.saturation_by_uniqueness(setup, a),
                finite_actions.direct_saturation(setup),
            )

    def test_pairs_action(self):
        self.assertEqual(len(finite_actions.PAIRS), 12)
        self.assertEqual(finite_actions.induced_on_pairs((0, 1, 2, 3)), tuple(range(12)))


if __name__ == "__main__":
    unittest.main()
