"""Readers and writers for the documented file formats.

Field files are JSON
``{"rect": [u_min, u_max, v_min, v_max], "nu": .., "nv": .., "values": [..]}``
with ``values`` flattened row-major (index ``i * nv + j`` holds the value
at ``(u_i, v_j)``), or CSV with a ``# rect u_min u_max v_min v_max nu nv``
header followed by ``nv`` lines of ``nu`` comma-separated reals (line
``j`` holds the fixed-``v_j`` row).

Map files describe either a split form built from two monotone 1-D maps
or a general pair of coordinate expressions with an explicit inverse
and codomain; see the README for the schema.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from . import expr as exprmod
from .causal import MonotoneMap1D, PlaneMap, make_causal_iso
from .errors import FieldFormatError
from .geometry import Grid2D, Rect, SampledField2D
from .smooth1d import Bump1D, mollifier
from .testfn import TestFunction2D, tensor_bump


def _rect_from_list(raw, what: str = "rect") -> Rect:
    try:
        u0, u1, v0, v1 = (float(x) for x in raw)
        return Rect(u0, u1, v0, v1)
    except (TypeError, ValueError) as exc:
        raise FieldFormatError(f"bad {what}: {raw!r} ({exc})") from exc


def field_to_dict(f: SampledField2D) -> dict:
    return {
        "rect": f.grid.rect.as_list(),
        "nu": f.grid.nu,
        "nv": f.grid.nv,
        "values": [float(x) for x in f.values.ravel(order="C")],
    }


def field_from_dict(obj: dict) -> SampledField2D:
    try:
        rect = _rect_from_list(obj["rect"])
        nu, nv = int(obj["nu"]), int(obj["nv"])
        values = np.asarray(obj["values"], dtype=float).reshape(nu, nv)
    except FieldFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldFormatError(f"malformed field object: {exc}") from exc
    try:
        return SampledField2D(Grid2D(rect, nu, nv), values)
    except ValueError as exc:
        raise FieldFormatError(str(exc)) from exc


def load_field(path: str | Path) -> SampledField2D:
    path = Path(path)
    if not path.exists():
        raise FieldFormatError(f"no such file: {path}")
    if path.suffix.lower() == ".csv":
        return _load_field_csv(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FieldFormatError(f"{path}: invalid JSON ({exc})") from exc
    return field_from_dict(obj)


def save_field(f: SampledField2D, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        _save_field_csv(f, path)
        return
    write_json_atomic(field_to_dict(f), path)


def _load_field_csv(path: Path) -> SampledField2D:
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise FieldFormatError(f"{path}: missing '# rect ...' header")
    head = lines[0].lstrip("#").split()
    if len(head) != 7 or head[0] != "rect":
        raise FieldFormatError(f"{path}: header must be '# rect u0 u1 v0 v1 nu nv'")
    rect = _rect_from_list(head[1:5])
    try:
        nu, nv = int(head[5]), int(head[6])
    except ValueError as exc:
        raise FieldFormatError(f"{path}: bad grid sizes in header") from exc
    rows = [line for line in lines[1:] if line.strip()]
    if len(rows) != nv:
        raise FieldFormatError(f"{path}: expected {nv} data lines, found {len(rows)}")
    try:
        data = np.array([[float(x) for x in row.split(",")] for row in rows])
    except ValueError as exc:
        raise FieldFormatError(f"{path}: non-numeric cell ({exc})") from exc
    if data.shape != (nv, nu):
        raise FieldFormatError(f"{path}: expected {nu} columns per line")
    try:
        return SampledField2D(Grid2D(rect, nu, nv), data.T)
    except ValueError as exc:
        raise FieldFormatError(str(exc)) from exc


def _save_field_csv(f: SampledField2D, path: Path) -> None:
    r = f.grid.rect
    lines = [f"# rect {r.u_min} {r.u_max} {r.v_min} {r.v_max} {f.grid.nu} {f.grid.nv}"]
    for j in range(f.grid.nv):
        lines.append(",".join(repr(float(x)) for x in f.values[:, j]))
    _write_text_atomic("\n".join(lines) + "\n", path)


def sample_expression(source: str, rect: Rect, resolution: int) -> SampledField2D:
    """Sample an expression in (u, v) on a fresh grid."""
    fn = exprmod.compile_expr(source, ("u", "v"))
    grid = Grid2D(rect, resolution, resolution)
    U, V = grid.meshgrid()
    values = np.broadcast_to(np.asarray(fn(U, V), dtype=float), U.shape)
    return SampledField2D(grid, values)


# --- test function specs -------------------------------------------------

def bump_from_dict(obj: dict, what: str = "bump") -> Bump1D:
    try:
        center = float(obj["center"])
        radius = float(obj["radius"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldFormatError(f"bad {what} spec {obj!r}: {exc}") from exc
    if "amplitude" in obj and obj["amplitude"] is not None:
        return Bump1D(center, radius, float(obj["amplitude"]))
    return mollifier(center, radius)


def testfn_from_dict(obj: dict) -> TestFunction2D:
    """Build a test function from its JSON spec.

    ``{"kind": "bump", ...}`` uses the same bump on both axes;
    ``{"kind": "tensor", "u": {...}, "v": {...}}`` gives the axes
    separately.  A bump without an explicit amplitude is normalized to
    unit mass.
    """
    kind = obj.get("kind")
    if kind == "bump":
        b = bump_from_dict(obj)
        return tensor_bump(b, b)
    if kind == "tensor":
        return tensor_bump(
            bump_from_dict(obj.get("u", {}), "u factor"),
            bump_from_dict(obj.get("v", {}), "v factor"),
        )
    raise FieldFormatError(f"unknown test function kind {kind!r}")


# --- map files ------------------------------------------------------------

def _monotone_from_dict(obj: dict, interval: tuple[float, float], label: str) -> MonotoneMap1D:
    if not isinstance(obj, dict) or ("expr" in obj) == ("table" in obj):
        raise FieldFormatError(
            f"{label}: specify exactly one of 'expr' or 'table', got {obj!r}"
        )
    if "expr" in obj:
        try:
            ast = exprmod.parse(str(obj["expr"]))
        except exprmod.ParseError:
            raise
        names = sorted(exprmod.free_vars(ast))
        if len(names) > 1:
            raise FieldFormatError(
                f"{label}: a 1-D map must use a single variable, found {names}"
            )
        var = names[0] if names else "s"

        def fn(xv):
            return exprmod.evaluate(ast, {var: np.asarray(xv, dtype=float)})

        return MonotoneMap1D.from_callable(fn, interval, label=label)
    rows = obj["table"]
    try:
        arr = np.asarray(rows, dtype=float)
        xs, ys = arr[:, 0], arr[:, 1]
    except (TypeError, ValueError, IndexError) as exc:
        raise FieldFormatError(f"{label}: bad table ({exc})") from exc
    pad = 1e-9 * (interval[1] - interval[0])
    if xs[0] > interval[0] + pad or xs[-1] < interval[1] - pad:
        raise FieldFormatError(
            f"{label}: table covers [{xs[0]}, {xs[-1]}] but the domain "
            f"needs [{interval[0]}, {interval[1]}]"
        )
    m = MonotoneMap1D.from_table(xs, ys, label=label)
    return dataclasses.replace(m, domain=(float(interval[0]), float(interval[1])))


def plane_map_from_dict(obj: dict) -> PlaneMap:
    kind = obj.get("kind")
    if kind == "split":
        domain = _rect_from_list(obj.get("domain"), "domain")
        orientation = obj.get("orientation")
        if orientation not in ("increasing", "decreasing"):
            raise FieldFormatError(
                f"split map orientation must be increasing|decreasing, got {orientation!r}"
            )
        # increasing: phi reads u, psi reads v; decreasing: phi reads v, psi reads u
        if orientation == "increasing":
            phi_iv = (domain.u_min, domain.u_max)
            psi_iv = (domain.v_min, domain.v_max)
        else:
            phi_iv = (domain.v_min, domain.v_max)
            psi_iv = (domain.u_min, domain.u_max)
        phi = _monotone_from_dict(obj.get("phi"), phi_iv, "phi")
        psi = _monotone_from_dict(obj.get("psi"), psi_iv, "psi")
        if phi.direction != orientation or psi.direction != orientation:
            raise FieldFormatError(
                f"declared orientation {orientation!r} but phi is {phi.direction} "
                f"and psi is {psi.direction}"
            )
        return make_causal_iso(phi, psi)
    if kind == "general":
        domain = _rect_from_list(obj.get("domain"), "domain")
        if obj.get("codomain") is None:
            raise FieldFormatError("general maps must declare a codomain")
        codomain = _rect_from_list(obj.get("codomain"), "codomain")
        inv = obj.get("inverse")
        if not isinstance(inv, dict) or "u" not in inv or "v" not in inv:
            raise FieldFormatError(
                "general maps need an inverse with 'u' and 'v' expressions "
                "(written in (u, v) standing for the codomain coordinates)"
            )
        sig = _compile_uv(obj.get("sigma"), "sigma")
        tau = _compile_uv(obj.get("tau"), "tau")
        inv_u = _compile_uv(inv["u"], "inverse.u")
        inv_v = _compile_uv(inv["v"], "inverse.v")

        def forward(U, V):
            U = np.asarray(U, dtype=float)
            V = np.asarray(V, dtype=float)
            return (
                np.broadcast_to(sig(U, V), np.broadcast_shapes(U.shape, V.shape)),
                np.broadcast_to(tau(U, V), np.broadcast_shapes(U.shape, V.shape)),
            )

        def inverse(S, T):
            S = np.asarray(S, dtype=float)
            T = np.asarray(T, dtype=float)
            return (
                np.broadcast_to(inv_u(S, T), np.broadcast_shapes(S.shape, T.shape)),
                np.broadcast_to(inv_v(S, T), np.broadcast_shapes(S.shape, T.shape)),
            )

        return PlaneMap(domain, codomain, forward, inverse, "general")
    raise FieldFormatError(f"unknown map kind {kind!r}")


def _compile_uv(spec, label: str):
    if not isinstance(spec, dict) or "expr" not in spec:
        raise FieldFormatError(f"{label}: expected an object with an 'expr'")
    return exprmod.compile_expr(str(spec["expr"]), ("u", "v"))


def load_map(path: str | Path) -> PlaneMap:
    path = Path(path)
    if not path.exists():
        raise FieldFormatError(f"no such file: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FieldFormatError(f"{path}: invalid JSON ({exc})") from exc
    return plane_map_from_dict(obj)


# --- atomic writers --------------------------------------------------------

def _write_text_atomic(text: str, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(obj: dict, path: str | Path) -> None:
    _write_text_atomic(json.dumps(obj, indent=2) + "\n", Path(path))
