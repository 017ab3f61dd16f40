"""Uniform-grid sampled functions and domain descriptions.

A :class:`GridFunction` is the discrete carrier for finitely differentiable
functions: per-axis uniform nodes, periodic axes omitting the duplicate
endpoint, and a real sample array.  Angle axes are periodic with period 2*pi;
action axes are plain intervals.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise DomainError("axis needs at least 2 nodes")
        if not self.hi > self.lo:
            raise DomainError("axis bounds must satisfy lo < hi")

    @property
    def spacing(self) -> float:
        if self.periodic:
            return (self.hi - self.lo) / self.count
        return (self.hi - self.lo) / (self.count - 1)

    def nodes(self) -> np.ndarray:
        if self.periodic:
            return self.lo + self.spacing * np.arange(self.count)
        return np.linspace(self.lo, self.hi, self.count)

    @property
    def length(self) -> float:
        return self.hi - self.lo


def angle_axis(count: int) -> Axis:
    return Axis(0.0, TWO_PI, count, periodic=True)


def action_axis(lo: float, hi: float, count: int) -> Axis:
    return Axis(lo, hi, count, periodic=False)


class GridFunction:
    """Real samples of a function on a tensor grid."""

    def __init__(self, axes, values):
        self.axes = tuple(axes)
        values = np.asarray(values, dtype=float)
        shape = tuple(ax.count for ax in self.axes)
        if values.shape != shape:
            raise DomainError(f"sample shape {values.shape} != grid shape {shape}")
        self.values = values

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self):
        return self.values.shape

    @classmethod
    def sample(cls, fn, axes):
        """Sample `fn` (vectorized over a trailing coordinate axis) on the grid."""
        axes = tuple(axes)
        mesh = np.meshgrid(*(ax.nodes() for ax in axes), indexing="ij")
        pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        vals = np.asarray(fn(pts), dtype=float).reshape([ax.count for ax in axes])
        return cls(axes, vals)

    def nodes(self, axis: int) -> np.ndarray:
        return self.axes[axis].nodes()

    def meshpoints(self) -> np.ndarray:
        mesh = np.meshgrid(*(ax.nodes() for ax in self.axes), indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)

    def restrict(self, axis: int, lo: float, hi: float) -> "GridFunction":
        """Slice a non-periodic axis down to nodes within [lo, hi]."""
        ax = self.axes[axis]
        if ax.periodic:
            raise DomainError("cannot restrict a periodic axis")
        nodes = ax.nodes()
        mask = (nodes >= lo - 1e-12) & (nodes <= hi + 1e-12)
        idx = np.nonzero(mask)[0]
        if idx.size < 2:
            raise DomainError("restriction leaves fewer than 2 nodes")
        new_ax = Axis(nodes[idx[0]], nodes[idx[-1]], idx.size, periodic=False)
        slicer = [slice(None)] * self.dim
        slicer[axis] = slice(idx[0], idx[-1] + 1)
        return GridFunction(
            self.axes[:axis] + (new_ax,) + self.axes[axis + 1 :], self.values[tuple(slicer)]
        )

    def coarsen(self) -> "GridFunction":
        """Every-second-node subgrid (used for Richardson-style estimates)."""
        slicer, axes = [], []
        for ax in self.axes:
            if ax.periodic:
                if ax.count % 2:
                    raise DomainError("cannot coarsen an odd periodic axis")
                axes.append(Axis(ax.lo, ax.hi, ax.count // 2, periodic=True))
            else:
                axes.append(Axis(ax.lo, ax.hi, (ax.count + 1) // 2, periodic=False))
            slicer.append(slice(None, None, 2))
        return GridFunction(axes, self.values[tuple(slicer)])

    # ------------------------------------------------------------ serialization
    SCHEMA = "neklab.gridfunction/1"

    def save(self, path_prefix, payload="bin"):
        """Write `<prefix>.json` header plus a row-major payload file."""
        import pathlib

        prefix = pathlib.Path(path_prefix)
        if payload == "bin":
            payload_name = prefix.name + ".f64"
            data = self.values.astype("<f8").tobytes(order="C")
            (prefix.parent / payload_name).write_bytes(data)
        elif payload == "csv":
            payload_name = prefix.name + ".csv"
            flat = self.values.reshape(-1)
            text = "\n".join(f"{v:.17g}" for v in flat) + "\n"
            (prefix.parent / payload_name).write_text(text)
        else:
            raise DomainError(f"unknown payload format {payload!r}")
        header = {
            "schema": self.SCHEMA,
            "axes": [
                {"lo": ax.lo, "hi": ax.hi, "count": ax.count, "periodic": ax.periodic}
                for ax in self.axes
            ],
            "payload": payload_name,
            "format": payload,
            "dtype": "<f8",
            "sha256": hashlib.sha256(self.values.astype("<f8").tobytes()).hexdigest(),
        }
        header_path = prefix.parent / (prefix.name + ".json")
        header_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
        return header_path

    @classmethod
    def load(cls, header_path):
        import pathlib

        header_path = pathlib.Path(header_path)
        header = json.loads(header_path.read_text())
        if header.get("schema") != cls.SCHEMA:
            raise DomainError(f"unexpected GridFunction schema {header.get('schema')!r}")
        axes = [
            Axis(a["lo"], a["hi"], int(a["count"]), bool(a["periodic"])) for a in header["axes"]
        ]
        payload_path = header_path.parent / header["payload"]
        shape = tuple(ax.count for ax in axes)
        if header["format"] == "bin":
            values = np.frombuffer(payload_path.read_bytes(), dtype="<f8").reshape(shape)
        else:
            values = np.loadtxt(payload_path).reshape(shape)
        return cls(axes, values.copy())

    def __repr__(self):
        tags = "x".join(
            f"{ax.count}{'p' if ax.periodic else ''}" for ax in self.axes
        )
        return f"GridFunction({tags})"


@dataclass(frozen=True)
class DomainSpec:
    """Action ball radius plus complex extension widths.

    `radius` is the sup-norm radius R of the action ball, `r` and `s` are the
    action and angle extension widths, `center` the ball center.
    """

    radius: float
    r: float = 0.0
    s: float = 0.0
    center: tuple = ()

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("action radius must be positive")
        if self.r < 0 or self.s < 0:
            raise DomainError("extension widths must be non-negative")

    def centered(self, n: int) -> np.ndarray:
        if self.center:
            c = np.asarray(self.center, dtype=float)
            if c.size != n:
                raise DomainError("center dimension mismatch")
            return c
        return np.zeros(n)

    def action_grid(self, n: int, points_per_axis: int = 9) -> np.ndarray:
        """Uniform sample of the closed sup-norm ball, shape (m, n)."""
        if points_per_axis < 1:
            raise DomainError("need at least one sample point per axis")
        c = self.centered(n)
        axes = [
            c[j] + np.linspace(-self.radius, self.radius, points_per_axis) for j in range(n)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=-1)
