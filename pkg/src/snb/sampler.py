"""Stopped-Bernoulli path simulation with reproducible generators."""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .dist import Endpoint, SnbParams
from .errors import DomainError

_BIT_GENERATORS = {
    "pcg64": np.random.PCG64,
    "philox": np.random.Philox,
}

ALGORITHMS = tuple(sorted(_BIT_GENERATORS))


@dataclass(frozen=True)
class TrajectorySample:
    """One simulated enrollment path, recorded through its stopping draw.

    Attributes:
        outcomes: The observed 0/1 responses, one per enrollment.
        stopping_time: Number of enrollments, equal to len(outcomes).
        responders: Number of ones among the outcomes.
        endpoint: Which boundary stopped the path.
    """

    outcomes: tuple[int, ...]
    stopping_time: int
    responders: int
    endpoint: Endpoint


@dataclass
class SeededGenerator:
    """Reproducible uniform source; identical (seed, algorithm) pairs give
    identical streams.

    Attributes:
        seed: Root entropy for the stream.
        algorithm: Bit generator name, one of 'pcg64' or 'philox'.
        stream_index: Optional substream selector; see :meth:`substream`.
    """

    seed: int
    algorithm: str = "pcg64"
    stream_index: int | None = None
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        try:
            bit_generator = _BIT_GENERATORS[self.algorithm]
        except KeyError:
            known = ", ".join(sorted(_BIT_GENERATORS))
            raise DomainError(
                f"unknown generator algorithm {self.algorithm!r}; choose from: {known}"
            ) from None
        spawn_key = () if self.stream_index is None else (operator.index(self.stream_index),)
        seq = np.random.SeedSequence(operator.index(self.seed), spawn_key=spawn_key)
        self._gen = np.random.Generator(bit_generator(seq))

    def substream(self, index: int) -> "SeededGenerator":
        """Independent generator derived from this seed, for parallel use."""
        return SeededGenerator(self.seed, self.algorithm, stream_index=index)

    def uniforms(self, n: int) -> np.ndarray:
        """Next n uniform [0, 1) variates from the stream."""
        return self._gen.random(operator.index(n))


def sample_path(params: SnbParams, gen: SeededGenerator) -> TrajectorySample:
    """Simulate one path until it hits a stopping boundary.

    Every path consumes exactly s + t - 1 uniforms from the generator
    regardless of where it stops, so stream positions stay aligned across
    parameter choices and batch sizes.
    """
    n_max = params.s + params.t - 1
    hits = gen.uniforms(n_max) < params.p
    ones = 0
    for i in range(n_max):
        ones += int(hits[i])
        k = i + 1
        if ones == params.s:
            return TrajectorySample(
                outcomes=tuple(int(h) for h in hits[:k]),
                stopping_time=k,
                responders=ones,
                endpoint=Endpoint.SUCCESS,
            )
        if k - ones == params.t:
            return TrajectorySample(
                outcomes=tuple(int(h) for h in hits[:k]),
                stopping_time=k,
                responders=ones,
                endpoint=Endpoint.FAILURE,
            )
    raise AssertionError("unreachable: some boundary is hit within s + t - 1 draws")


def sample_n(params: SnbParams, n: int, gen: SeededGenerator) -> list[TrajectorySample]:
    """Simulate n independent paths from one generator.

    Raises:
        DomainError: If n is not a positive integer.
    """
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"sample count must be positive, got n={n}")
    return [sample_path(params, gen) for _ in range(n)]


def empirical_pmf(samples: list[TrajectorySample]) -> dict[int, float]:
    """Relative frequency of each observed stopping time.

    Raises:
        DomainError: If the sample list is empty.
    """
    if not samples:
        raise DomainError("empirical_pmf needs at least one sample")
    counts = Counter(sample.stopping_time for sample in samples)
    total = len(samples)
    return {k: counts[k] / total for k in sorted(counts)}
