"""xorshift64* generator (Marsaglia shifts 12/25/27, Vigna's multiplier).

Stdlib `random` is not used for seeded suites so that a seed reproduces the
same trials in any language that implements the same 20 lines.
"""

from fractions import Fraction

MASK = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D


def _splitmix64(x):
    # seed scrambler so that small seeds do not give correlated streams
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed=0):
        s = _splitmix64(int(seed) & MASK)
        self.state = s or 0x9E3779B97F4A7C15

    def next_u64(self):
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK

    def below(self, n):
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def coin(self, num=1, den=2):
        return self.below(den) < num

    def shuffle(self, seq):
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def sample(self, seq, k):
        pool = list(seq)
        self.shuffle(pool)
        return pool[:k]

    def fraction(self, lo, hi, den):
        """Uniform value in {lo + j/den} within [lo, hi]."""
        lo, hi = Fraction(lo), Fraction(hi)
        steps = int((hi - lo) * den)
        return lo + Fraction(self.below(steps + 1), den)

    def fork(self, tag):
        """Independent child stream keyed by a string tag."""
        h = 0xCBF29CE484222325
        for ch in str(tag).encode():
            h = ((h ^ ch) * 0x100000001B3) & MASK
        return XorShift64Star(self.next_u64() ^ h)
