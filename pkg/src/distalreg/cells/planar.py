"""Vertical decomposition of a line arrangement in the plane.

Cells are relatively open and convex: trapezoids (faces), vertical walls,
line edges and vertices.  A wall rises (or falls) from each vertex to the
next line, so every trapezoid is described by its lower and upper line and
by one extra line on each vertical side: at most four lines in all.

Degenerate input is handled directly: coincident lines are merged,
vertical lines are first-class, and any number of lines may share a vertex
or an abscissa.
"""
from __future__ import annotations

import bisect
import math
from fractions import Fraction

import numpy as np

from .. import kernels
from ..structures import integer_form


def _canonical(form) -> tuple | None:
    a, b, c = integer_form(form)
    if a == 0 and b == 0:
        return None
    s = b if b != 0 else a
    if s < 0:
        a, b, c = -a, -b, -c
    return (a, b, c)


class Line:
    __slots__ = ("form", "vertical", "slope", "icpt", "x0", "id")

    def __init__(self, form, ident):
        a, b, c = form
        self.form = form
        self.id = ident
        self.vertical = b == 0
        if self.vertical:
            self.x0 = Fraction(-c, a)
            self.slope = self.icpt = None
        else:
            self.slope = Fraction(-a, b)
            self.icpt = Fraction(-c, b)
            self.x0 = None

    def y_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.icpt

    def __repr__(self):
        return f"Line{self.form}"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _hpoint(x: Fraction, y: Fraction) -> tuple:
    w = _lcm(x.denominator, y.denominator)
    return (int(x * w), int(y * w), w)


def _hdir(dx: Fraction, dy: Fraction) -> tuple:
    w = _lcm(Fraction(dx).denominator, Fraction(dy).denominator)
    X, Y = int(dx * w), int(dy * w)
    g = math.gcd(X, Y) or 1
    return (X // g, Y // g, 0)


class Cell:
    """A relatively open convex cell of the vertical decomposition."""

    dim_space = 2
    __slots__ = ("kind", "dim", "lo", "up", "left", "right", "line", "x", "point",
                 "provenance", "lines", "_points", "_dirs")

    def __init__(self, kind, dim, *, lo=None, up=None, left=None, right=None, line=None,
                 x=None, point=None):
        self.kind = kind
        self.dim = dim
        self.lo, self.up = lo, up
        self.left, self.right = left, right
        self.line = line
        self.x = x
        self.point = point
        self.provenance = ()
        self.lines = ()
        self._points: list = []
        self._dirs: list = []

    # --- membership -----------------------------------------------------

    def contains(self, p) -> bool:
        x, y = Fraction(p[0]), Fraction(p[1])
        k = self.kind
        if k == "vertex":
            return (x, y) == self.point
        if k in ("wall", "vedge"):
            if x != self.x:
                return False
            return ((self.lo is None or y > self.lo.y_at(x)) and
                    (self.up is None or y < self.up.y_at(x)))
        if k == "edge":
            return (self.line.y_at(x) == y and (self.left is None or x > self.left)
                    and (self.right is None or x < self.right))
        return ((self.left is None or x > self.left) and (self.right is None or x < self.right)
                and (self.lo is None or y > self.lo.y_at(x))
                and (self.up is None or y < self.up.y_at(x)))

    # --- generators -----------------------------------------------------

    def generators(self) -> list:
        """Homogeneous integer generators: points ``W > 0`` then directions ``W = 0``."""
        return [_hpoint(*p) for p in self._points] + [_hdir(*d) for d in self._dirs]

    def witness(self) -> tuple:
        """A rational point in the relative interior (all generator weights positive)."""
        n = len(self._points)
        x = sum((p[0] for p in self._points), Fraction(0)) / n
        y = sum((p[1] for p in self._points), Fraction(0)) / n
        for dx, dy in self._dirs:
            x += dx
            y += dy
        return (x, y)

    def __repr__(self):
        if self.kind == "vertex":
            return f"Vertex{self.point}"
        return f"Cell({self.kind}, lo={self.lo}, up={self.up}, left={self.left}, right={self.right})"

    def to_json(self) -> dict:
        from ..exactnum import format_rational as fr
        d = {"kind": self.kind, "dim": self.dim, "lines": [list(l.form) for l in self.lines],
             "provenance": list(self.provenance)}
        if self.kind == "vertex":
            d["point"] = [fr(self.point[0]), fr(self.point[1])]
            return d
        for key in ("left", "right", "x"):
            v = getattr(self, key)
            if v is not None:
                d[key] = fr(v)
        for key in ("lo", "up", "line"):
            v = getattr(self, key)
            if v is not None:
                d[key] = list(v.form)
        return d


def _line_dirs(line: Line, left_open: bool, right_open: bool) -> list:
    out = []
    if left_open:
        out.append((Fraction(-1), -line.slope))
    if right_open:
        out.append((Fraction(1), line.slope))
    return out


class PlanarDecomposition(list):
    def __init__(self, forms, owners):
        super().__init__()
        self.degenerate = []
        lines: list[Line] = []
        seen: dict = {}
        self.owner: list[int] = []
        for form, owner in zip(forms, owners):
            cf = _canonical(form)
            if cf is None:
                if owner not in self.degenerate:
                    self.degenerate.append(owner)
                continue
            if cf in seen:
                continue
            seen[cf] = len(lines)
            lines.append(Line(cf, len(lines)))
            self.owner.append(owner)
        self.lines = lines
        self._build()

    # ------------------------------------------------------------------
    def _build(self):
        lines = self.lines
        nonv = [l for l in lines if not l.vertical]
        vert = {l.x0: l for l in lines if l.vertical}
        xs = set(vert)
        for i, l1 in enumerate(nonv):
            for l2 in nonv[i + 1:]:
                if l1.slope != l2.slope:
                    xs.add((l2.icpt - l1.icpt) / (l1.slope - l2.slope))
        X = sorted(xs)
        self.X = X
        self.vert = vert
        self.nonv = nonv

        # crossing structure at each special abscissa
        self.at_x: list[list[tuple[Fraction, list[Line], bool]]] = []
        vx: dict[int, list[Fraction]] = {l.id: [] for l in nonv}
        for x in X:
            groups: dict[Fraction, list[Line]] = {}
            for l in nonv:
                groups.setdefault(l.y_at(x), []).append(l)
            pts = []
            for y in sorted(groups):
                ls = groups[y]
                is_vertex = len(ls) >= 2 or x in vert
                pts.append((y, ls, is_vertex))
                if is_vertex:
                    for l in ls:
                        vx[l.id].append(x)
            self.at_x.append(pts)
        self.vx = vx
        self.vertex_set = {l.id: set(v) for l, v in ((l, vx[l.id]) for l in nonv)}

        cells: list[Cell] = []
        self.face_of: dict = {}
        self.slab_order: list[list[Line]] = []
        # faces, by a left-to-right sweep over slabs
        open_faces: dict = {}
        for s in range(len(X) + 1):
            if not X:
                xs_ = Fraction(0)
            elif s == 0:
                xs_ = X[0] - 1
            elif s == len(X):
                xs_ = X[-1] + 1
            else:
                xs_ = (X[s - 1] + X[s]) / 2
            order = sorted(nonv, key=lambda l: l.y_at(xs_))
            self.slab_order.append(order)
            chain = [None] + order + [None]
            pieces = [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
            new_open = {}
            bx = X[s - 1] if s > 0 else None
            for lo, up in pieces:
                key = (lo.id if lo else None, up.id if up else None)
                fid = None
                if s > 0 and key in open_faces and self._passes(bx, lo, up):
                    fid = open_faces.pop(key)
                else:
                    fid = len(cells)
                    cells.append(Cell("face", 2, lo=lo, up=up, left=bx))
                new_open[key] = fid
                self.face_of[(s, key)] = fid
            for key, fid in open_faces.items():
                cells[fid].right = bx
            open_faces = new_open
        self.nfaces = len(cells)

        # walls and vertical edges at special abscissae
        self.wall_of: dict = {}
        for j, x in enumerate(X):
            pts = self.at_x[j]
            ys = [None] + pts + [None]
            for g in range(len(pts) + 1):
                below, above = ys[g], ys[g + 1]
                if x in vert:
                    kind = "vedge"
                elif (below and below[2]) or (above and above[2]):
                    kind = "wall"
                else:
                    continue
                lo = below[1][-1] if below else None
                up = above[1][0] if above else None
                c = Cell(kind, 1, lo=lo, up=up, x=x, line=vert.get(x))
                self.wall_of[(j, g)] = len(cells)
                cells.append(c)
        if not nonv:
            # vertical lines only: each one is a single edge
            for j, x in enumerate(X):
                if (j, 0) not in self.wall_of:
                    self.wall_of[(j, 0)] = len(cells)
                    cells.append(Cell("vedge", 1, x=x, line=vert[x]))

        # edges of non-vertical lines
        self.edge_of: dict = {}
        for l in nonv:
            vs = vx[l.id]
            bounds = [None] + vs + [None]
            for k in range(len(vs) + 1):
                self.edge_of[(l.id, k)] = len(cells)
                cells.append(Cell("edge", 1, line=l, left=bounds[k], right=bounds[k + 1]))

        # vertices
        self.vertex_of: dict = {}
        for j, x in enumerate(X):
            for g, (y, ls, is_vertex) in enumerate(self.at_x[j]):
                if is_vertex:
                    self.vertex_of[(j, g)] = len(cells)
                    cells.append(Cell("vertex", 0, point=(x, y)))

        self.extend(cells)
        for c in cells:
            self._finish(c)

    def _passes(self, x, lo, up) -> bool:
        """Does the piece between ``lo`` and ``up`` continue across abscissa ``x``?"""
        if x in self.vert:
            return False
        for l in (lo, up):
            if l is not None and x in self.vertex_set[l.id]:
                return False
        return True

    def _side_lines(self, x, lo, up) -> list:
        """Lines defining a vertical side at ``x`` of a piece bounded by ``lo``/``up``."""
        if x is None:
            return []
        if x in self.vert:
            return [self.vert[x]]
        j = bisect.bisect_left(self.X, x)
        for l in (lo, up):
            if l is None:
                continue
            y = l.y_at(x)
            for yy, ls, is_vertex in self.at_x[j]:
                if yy == y and is_vertex:
                    return [next(m for m in ls if m is not l)]
        return []

    def _finish(self, c: Cell):
        pts, dirs = [], []
        if c.kind == "vertex":
            pts.append(c.point)
            used = []
            j = bisect.bisect_left(self.X, c.point[0])
            for yy, ls, _ in self.at_x[j]:
                if yy == c.point[1]:
                    used = list(ls)
            if c.point[0] in self.vert:
                used.append(self.vert[c.point[0]])
        elif c.kind in ("wall", "vedge"):
            x = c.x
            for l in (c.lo, c.up):
                if l is not None:
                    pts.append((x, l.y_at(x)))
            if c.lo is None:
                dirs.append((Fraction(0), Fraction(-1)))
            if c.up is None:
                dirs.append((Fraction(0), Fraction(1)))
            if not pts:
                pts.append((x, Fraction(0)))
            used = [l for l in (c.lo, c.up, c.line) if l is not None]
            if c.kind == "wall":
                # the wall hangs off a vertex on lo or up
                used += self._side_lines(x, c.lo, c.up)[:1]
        elif c.kind == "edge":
            l = c.line
            for x in (c.left, c.right):
                if x is not None:
                    pts.append((x, l.y_at(x)))
            dirs += _line_dirs(l, c.left is None, c.right is None)
            if not pts:
                pts.append((Fraction(0), l.icpt))
            used = [l] + self._side_lines(c.left, l, None)[:1] + self._side_lines(c.right, l, None)[:1]
        else:
            xs_ = [x for x in (c.left, c.right) if x is not None] or [Fraction(0)]
            for x in xs_:
                if c.lo is None and c.up is None:
                    pts.append((x, Fraction(0)))
                for l in (c.lo, c.up):
                    if l is not None:
                        pts.append((x, l.y_at(x)))
            for l in (c.lo, c.up):
                if l is not None:
                    dirs += _line_dirs(l, c.left is None, c.right is None)
            if c.lo is None and c.up is None:
                if c.left is None:
                    dirs.append((Fraction(-1), Fraction(0)))
                if c.right is None:
                    dirs.append((Fraction(1), Fraction(0)))
            if c.lo is None:
                dirs.append((Fraction(0), Fraction(-1)))
            if c.up is None:
                dirs.append((Fraction(0), Fraction(1)))
            used = [l for l in (c.lo, c.up) if l is not None]
            used += self._side_lines(c.left, c.lo, c.up)[:1] + self._side_lines(c.right, c.lo, c.up)[:1]
        c._points, c._dirs = pts, dirs
        uniq = []
        for l in used:
            if l not in uniq:
                uniq.append(l)
        c.lines = tuple(uniq)
        c.provenance = tuple(sorted({self.owner[l.id] for l in uniq}))

    # ------------------------------------------------------------------
    def locate(self, p) -> int:
        x, y = Fraction(p[0]), Fraction(p[1])
        X = self.X
        j = bisect.bisect_left(X, x)
        if j < len(X) and X[j] == x:
            pts = self.at_x[j]
            ys = [q[0] for q in pts]
            g = bisect.bisect_left(ys, y)
            if g < len(ys) and ys[g] == y:
                if pts[g][2]:
                    return self.vertex_of[(j, g)]
                line = pts[g][1][0]
                return self._edge_at(line, x)
            if (j, g) in self.wall_of:
                return self.wall_of[(j, g)]
            below = pts[g - 1][1][-1] if g > 0 else None
            above = pts[g][1][0] if g < len(pts) else None
            key = (below.id if below else None, above.id if above else None)
            return self.face_of[(j, key)]
        order = self.slab_order[j]
        ys = [l.y_at(x) for l in order]
        g = bisect.bisect_left(ys, y)
        if g < len(ys) and ys[g] == y:
            return self._edge_at(order[g], x)
        below = order[g - 1] if g > 0 else None
        above = order[g] if g < len(order) else None
        key = (below.id if below else None, above.id if above else None)
        return self.face_of[(j, key)]

    def _edge_at(self, line: Line, x: Fraction) -> int:
        k = bisect.bisect_left(self.vx[line.id], x)
        return self.edge_of[(line.id, k)]

    def kernel_arrays(self):
        gens, ptr, dims = [], [0], []
        for c in self:
            g = c.generators()
            gens.extend(g)
            ptr.append(len(gens))
            dims.append(c.dim)
        return gens, ptr, dims


def decompose_planar(R, S) -> PlanarDecomposition:
    forms, owners = [], []
    for si, s in enumerate(S):
        for f in R.linear_forms(s):
            forms.append(f)
            owners.append(si)
    return PlanarDecomposition(forms, owners)


def _truth_bits(R, natoms: int, j: int, fixed: list) -> int:
    """Sign bits of atom ``j`` for which the formula is true, other atoms fixed."""
    bits = 0
    for s, bit in ((-1, 1), (0, 2), (1, 4)):
        signs = list(fixed)
        signs[j] = s
        if R.truth_from_signs(signs):
            bits |= bit
    return bits


_SINGLE = {1: -1, 2: 0, 4: 1}


def crossing_matrix_planar(dec: PlanarDecomposition, R, B) -> np.ndarray:
    """Boolean ``(len(dec), len(B))`` matrix of crossings, via realized-sign masks."""
    natoms = len(R.atoms)
    out = np.zeros((len(dec), len(B)), dtype=bool)
    if natoms == 0 or not len(B):
        return out
    forms = [f for b in B for f in R.linear_forms(b)]
    gens, ptr, dims = dec.kernel_arrays()
    masks = kernels.cell_sign_masks(gens, ptr, dims, forms).reshape(len(dec), len(B), natoms)
    if natoms == 1:
        t = _truth_bits(R, 1, 0, [0])
        m = masks[:, :, 0]
        return ((m & t) != 0) & ((m & (7 & ~t)) != 0)
    single = np.isin(masks, (1, 2, 4))
    nonconst = (~single).sum(axis=2)
    for c, j in zip(*np.nonzero(nonconst)):
        row = masks[c, j]
        free = [k for k in range(natoms) if not single[c, j, k]]
        if len(free) == 1:
            k = free[0]
            fixed = [_SINGLE.get(int(v), 0) for v in row]
            t = _truth_bits(R, natoms, k, fixed)
            m = int(row[k])
            out[c, j] = bool(m & t) and bool(m & 7 & ~t)
        else:
            out[c, j] = crosses_by_witness(dec[c], R, B[j])
    return out


def _witness_points(C: Cell, lines: list[Line]) -> list:
    """Points of ``C`` meeting every face of its subdivision by ``lines``."""
    if C.kind == "vertex":
        return [C.point]
    bounding = [l for l in (C.lo, C.up, C.line) if l is not None and not l.vertical]
    nonv = [l for l in lines if not l.vertical] + bounding
    crit = set()
    for x in (C.left, C.right, C.x):
        if x is not None:
            crit.add(x)
    for l in lines:
        if l.vertical:
            crit.add(l.x0)
    for i, l1 in enumerate(nonv):
        for l2 in nonv[i + 1:]:
            if l1.slope != l2.slope:
                crit.add((l2.icpt - l1.icpt) / (l1.slope - l2.slope))
    if C.x is not None:
        xs = [C.x]
    else:
        cs = sorted(crit)
        xs = list(cs) + [(cs[i] + cs[i + 1]) / 2 for i in range(len(cs) - 1)]
        xs += [cs[0] - 1, cs[-1] + 1] if cs else [Fraction(0)]
    pts = []
    for x in xs:
        ys = sorted({l.y_at(x) for l in nonv})
        cand = list(ys) + [(ys[i] + ys[i + 1]) / 2 for i in range(len(ys) - 1)]
        cand += [ys[0] - 1, ys[-1] + 1] if ys else [Fraction(0)]
        for y in cand:
            if C.contains((x, y)):
                pts.append((x, y))
    return pts


def crosses_by_witness(C: Cell, R, b) -> bool:
    """Exact crossing test that evaluates ``phi`` on a witness in every piece of ``C``."""
    if C.dim == 0:
        return False
    lines = []
    for f in R.linear_forms(b):
        cf = _canonical(f)
        if cf is not None:
            lines.append(Line(cf, -1))
    vals = {R.holds(p, b) for p in _witness_points(C, lines)}
    return len(vals) > 1


def value_on_planar(C: Cell, R, b) -> bool:
    return R.holds(C.witness(), b)
