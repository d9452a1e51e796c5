"""
Planted-partition graphs and perturbed partition ensembles

All randomness comes from numpy's PCG64 generator (numpy.random.default_rng)
seeded with the caller's integer seed, so outputs depend on the seed alone.
"""
import logging

import numpy as np

from medcon.errors import RangeError, ValidationError
from medcon.models.graph import Graph
from medcon.models.partition import Partition

logger = logging.getLogger(__name__)


def make_rng(seed):
    """The one generator type used for every synthetic draw"""
    return np.random.Generator(np.random.PCG64(seed))


class PlantedPartitionSpec:
    """q equal blocks of size s; intra pairs linked with p_in, inter pairs with p_out"""

    def __init__(self, q, s, p_in, p_out, seed=0):
        self.q = int(q)
        self.s = int(s)
        self.p_in = float(p_in)
        self.p_out = float(p_out)
        self.seed = int(seed)
        self.validate()

    @property
    def n(self):
        return self.q * self.s

    def validate(self):
        """Check 0 <= p_out <= p_in <= 1 and positive block shape"""
        if self.q < 1 or self.s < 1:
            raise ValidationError(f"need q >= 1 and s >= 1, got q={self.q}, s={self.s}", stage='synth')
        if not 0.0 <= self.p_out <= self.p_in <= 1.0:
            raise RangeError(
                f"need 0 <= p_out <= p_in <= 1, got p_in={self.p_in}, p_out={self.p_out}", stage='synth')

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'q': self.q, 's': self.s, 'p_in': self.p_in, 'p_out': self.p_out, 'seed': self.seed, 'n': self.n}

    def __repr__(self):
        return f'<PlantedPartitionSpec q={self.q} s={self.s} p_in={self.p_in} p_out={self.p_out} seed={self.seed}>'


def _sample_pairs(rng, population, p):
    """Indices of a Binomial(population, p) sized uniform subset of range(population)"""
    if population == 0 or p <= 0.0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(population, dtype=np.int64)
    count = int(rng.binomial(population, p))
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return np.sort(rng.choice(population, size=count, replace=False)).astype(np.int64)


def _triangle_pairs(index):
    """Map linear index t to (i, j) with j < i, t = i(i-1)/2 + j"""
    i = ((1 + np.sqrt(1 + 8 * index.astype(np.float64))) // 2).astype(np.int64)
    # float rounding can land one off in either direction
    i -= (i * (i - 1) // 2) > index
    i += ((i + 1) * i // 2) <= index
    j = index - i * (i - 1) // 2
    return i, j


def generate_planted(spec):
    """Random graph with planted blocks and its ground-truth partition"""
    spec.validate()
    rng = make_rng(spec.seed)
    s = spec.s
    pieces = []

    for a in range(spec.q):
        base_a = a * s
        # intra-block pairs
        picked = _sample_pairs(rng, s * (s - 1) // 2, spec.p_in)
        if picked.size:
            i, j = _triangle_pairs(picked)
            pieces.append(np.column_stack((base_a + i, base_a + j)))

        # block pairs a < b
        for b in range(a + 1, spec.q):
            picked = _sample_pairs(rng, s * s, spec.p_out)
            if picked.size:
                pieces.append(np.column_stack((base_a + picked // s, b * s + picked % s)))

    edges = np.concatenate(pieces) if pieces else np.zeros((0, 2), dtype=np.int64)
    graph = Graph.from_edges(spec.n, edges)
    truth = Partition(np.repeat(np.arange(spec.q, dtype=np.int64), s))
    logger.debug("planted graph n=%d m=%d", graph.n, graph.m)
    return graph, truth


def perturb_labels(labels, epsilon, seed=0):
    """Raw relabeled copy of canonical `labels`; labels keep their meaning (no renumbering)"""
    if not 0.0 <= epsilon <= 1.0:
        raise RangeError(f"epsilon must lie in [0, 1], got {epsilon}", stage='synth')
    rng = make_rng(seed)
    labels = np.array(labels, dtype=np.int64)
    n = labels.shape[0]
    b = int(labels.max()) + 1 if n else 0
    if b < 2:
        return labels

    flip = rng.random(n) < epsilon
    # uniform over the b - 1 other clusters: shift by 1..b-1 modulo b
    shift = rng.integers(1, b, size=n)
    labels[flip] = (labels[flip] + shift[flip]) % b
    return labels


def perturb_partition(partition, epsilon, seed=0):
    """Reassign each vertex with probability epsilon to a uniformly chosen other existing cluster"""
    return Partition(perturb_labels(partition.labels, epsilon, seed=seed))


def make_ensemble(truth, size, epsilon, seed=0):
    """`size` independent perturbations of `truth`, seeds derived from `seed`"""
    seeds = np.random.SeedSequence(seed).spawn(size)
    return [perturb_partition(truth, epsilon, seed=child) for child in seeds]


def generate_instance(spec, size, epsilon):
    """Planted graph, truth and a perturbed ensemble, all from spec.seed"""
    graph, truth = generate_planted(spec)
    ensemble = make_ensemble(truth, size, epsilon, seed=spec.seed)
    return graph, truth, ensemble
