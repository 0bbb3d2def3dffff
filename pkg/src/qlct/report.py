"""Uniform result record for the theorem verifiers."""
from dataclasses import dataclass, field
import re

import numpy as np


@dataclass
class TheoremReport:
    theorem: str
    max_rel: float
    at: tuple
    mean_rel: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(np.isfinite(self.max_rel) and self.max_rel < self.tol)

    def line(self):
        return "theorem=%s max_rel=%.3e at=(%d,%d) mean_rel=%.3e tol=%.1e pass=%s" % (
            self.theorem,
            self.max_rel,
            self.at[0],
            self.at[1],
            self.mean_rel,
            self.tol,
            str(self.passed).lower(),
        )

    __str__ = line

    @classmethod
    def parse(cls, text):
        m = re.match(
            r"theorem=(\S+) max_rel=(\S+) at=\((-?\d+),(-?\d+)\) mean_rel=(\S+) tol=(\S+) pass=(true|false)",
            text.strip(),
        )
        if not m:
            raise ValueError("not a report line: %r" % text)
        return cls(m[1], float(m[2]), (int(m[3]), int(m[4])), float(m[5]), float(m[6]))


def deviation(lhs, rhs):
    """Per-sample |lhs - rhs| scaled by the peak modulus of rhs."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    diff = np.sqrt(np.sum((lhs - rhs) ** 2, axis=-1))
    scale = np.sqrt(np.sum(rhs**2, axis=-1)).max()
    if scale == 0:
        scale = 1.0
    return diff / scale


def compare(name, lhs, rhs, tol, **details):
    dev = deviation(lhs, rhs)
    idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return TheoremReport(name, float(dev.max()), tuple(int(i) for i in idx), float(dev.mean()), tol, details)


def combine(name, reports, tol):
    """Worst of several sub-identities, keeping each one in details."""
    worst = max(reports, key=lambda r: r.max_rel)
    details = {r.theorem: r.max_rel for r in reports}
    mean = float(np.mean([r.mean_rel for r in reports]))
    return TheoremReport(name, worst.max_rel, worst.at, mean, tol, details)
