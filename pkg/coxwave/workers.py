from __future__ import annotations

import logging
import os
import traceback
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Any, Callable, TypeVar

import numpy as np

__all__ = ("BlockPool",)

_T = TypeVar("_T")
_LOG = logging.getLogger(__name__)
_LOG.setLevel(logging.INFO)


class _Block:
    __slots__ = ("index", "size", "future")

    def __init__(self, index: int, size: int, future: Future[Any]) -> None:
        self.index = index
        self.size = size
        self.future = future


class BlockPool:
    """Runs seeded Monte Carlo blocks on a thread pool.

    Block i always draws from the i-th child of ``SeedSequence(seed)``, so
    results do not depend on the number of workers or on scheduling.

    Parameters
    ----------
    max_workers : int, optional
        Worker threads, by default the CPU count (at most 8).
    """

    def __init__(self, max_workers: int | None = None) -> None:
        self.max_workers = max_workers or min(8, os.cpu_count() or 1)

    @staticmethod
    def split(total: int, block_size: int) -> list[int]:
        """Sizes of consecutive blocks covering `total` samples."""

        full, rest = divmod(total, block_size)
        return [block_size] * full + ([rest] if rest else [])

    def run(
        self,
        func: Callable[[int, np.random.Generator], _T],
        seed: int,
        total: int,
        block_size: int,
    ) -> list[_T]:
        """Call ``func(size, rng)`` once per block, in block order.

        Parameters
        ----------
        func : Callable[[int, np.random.Generator], _T]
            Produces the result of one block from its size and generator.
        seed : int
            The root seed.
        total : int
            Total number of samples.
        block_size : int
            Samples per block.

        Returns
        -------
        list[_T]
            One result per block.
        """

        sizes = self.split(total, block_size)
        children = np.random.SeedSequence(seed).spawn(len(sizes))
        results: list[_T] = []
        with ThreadPoolExecutor(self.max_workers) as pool:
            blocks = [
                _Block(
                    i,
                    size,
                    pool.submit(func, size, np.random.default_rng(child)),
                )
                for i, (size, child) in enumerate(zip(sizes, children))
            ]
            for block in blocks:
                try:
                    results.append(block.future.result())
                except Exception:
                    _LOG.error(f"Exception in sample block {block.index}:")
                    _LOG.error(traceback.format_exc())
                    for other in blocks:
                        other.future.cancel()
                    raise
        return results
