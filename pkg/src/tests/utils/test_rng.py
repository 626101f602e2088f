from eharqsim.utils.rng import Purpose, derive_seed, substream


class TestSubstream:
    def test_identical_keys(self):
        a = substream(7, Purpose.RECORD, 3).random(4)
        b = substream(7, Purpose.RECORD, 3).random(4)

        assert a.tolist() == b.tolist()

    def test_distinct_purposes(self):
        a = substream(7, Purpose.RECORD, 3).random(4)
        b = substream(7, Purpose.FADING, 3).random(4)

        assert a.tolist() != b.tolist()

    def test_distinct_indices(self):
        a = substream(7, Purpose.RECORD, 3).random(4)
        b = substream(7, Purpose.RECORD, 4).random(4)

        assert a.tolist() != b.tolist()


class TestDeriveSeed:
    def test_range(self):
        seed = derive_seed(2**64 - 1, Purpose.SPLIT, 2)

        assert 0 <= seed < 2**63

    def test_deterministic(self):
        assert derive_seed(1, Purpose.SPLIT, 0) == derive_seed(
            1, Purpose.SPLIT, 0
        )
        assert derive_seed(1, Purpose.SPLIT, 0) != derive_seed(
            1, Purpose.SPLIT, 1
        )
