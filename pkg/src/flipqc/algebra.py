"""Finite-dimensional graded commutative algebras, nilpotent jets and eigen-multisets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigError, NumericalError
from .germs import CoefficientGerm, Germ


class GradedAlgebra:
    """Commutative algebra with basis x_0..x_{n-1} and x_i x_j = sum_k c[i,j,k] x_k.

    ``top_index`` marks the basis element whose coefficient is the integral.
    Rings whose relations mix degrees (quantum deformations) set
    ``q_deformed`` so that the grading check is skipped.
    """

    def __init__(self, basis_labels: Sequence[str], degrees: Sequence[int], struct_consts,
                 unit_index: int = 0, top_index: int | None = None, q_deformed: bool = False,
                 check: bool = True, tol: float = 1e-12):
        c = np.array(struct_consts, dtype=complex)
        n = len(basis_labels)
        if c.shape != (n, n, n):
            raise ConfigError(f"structure constants have shape {c.shape}, expected {(n, n, n)}")
        if len(degrees) != n:
            raise ConfigError("one degree per basis element required")
        if any(d < 0 or d % 2 for d in degrees):
            raise ConfigError("degrees must be non-negative even integers")
        self.basis_labels = list(basis_labels)
        self.degrees = [int(d) for d in degrees]
        self.struct_consts = c
        self.struct_consts.setflags(write=False)
        self.unit_index = int(unit_index)
        self.top_index = None if top_index is None else int(top_index)
        self.q_deformed = bool(q_deformed)
        # _left[i] is the matrix of multiplication by x_i: column j = coeffs of x_i x_j
        self._left = np.ascontiguousarray(np.transpose(c, (0, 2, 1)))
        if check:
            self.validate(tol)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def validate(self, tol: float = 1e-12) -> None:
        c = self.struct_consts
        scale = max(1.0, float(np.abs(c).max()))
        if np.abs(c - np.transpose(c, (1, 0, 2))).max() > tol * scale:
            raise ConfigError("algebra is not commutative")
        # (x_i x_j) x_k vs x_i (x_j x_k)
        lhs = np.einsum("ijm,mkn->ijkn", c, c)
        rhs = np.einsum("jkm,imn->ijkn", c, c)
        if np.abs(lhs - rhs).max() > tol * scale ** 2:
            raise ConfigError("algebra is not associative")
        u = self.unit_index
        if np.abs(c[u] - np.eye(self.dim)).max() > tol:
            raise ConfigError("unit_index does not act as the identity")
        if not self.q_deformed:
            deg = np.array(self.degrees)
            for i, j, k in zip(*np.nonzero(np.abs(c) > tol)):
                if deg[i] + deg[j] != deg[k]:
                    raise ConfigError(f"product of {self.basis_labels[i]} and {self.basis_labels[j]} breaks the grading")

    # element constructors
    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim, complex))

    def unit(self) -> "AlgebraElement":
        return self.basis(self.unit_index)

    def basis(self, i: int) -> "AlgebraElement":
        v = np.zeros(self.dim, complex)
        v[i] = 1
        return AlgebraElement(self, v)

    def scalar(self, c: complex) -> "AlgebraElement":
        return complex(c) * self.unit()

    def left_matrix(self, i: int) -> np.ndarray:
        return self._left[i]

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def __repr__(self):
        return f"GradedAlgebra(dim={self.dim}, basis={self.basis_labels})"


class AlgebraElement:
    __slots__ = ("parent", "coeffs")
    __array_priority__ = 1000

    def __init__(self, parent: GradedAlgebra, coeffs):
        v = np.array(coeffs, dtype=complex).reshape(-1)
        if len(v) != parent.dim:
            raise ConfigError(f"element has {len(v)} coefficients, algebra has dimension {parent.dim}")
        self.parent = parent
        self.coeffs = v

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent:
                raise ConfigError("elements belong to different algebras")
            return other
        if np.isscalar(other):
            return self.parent.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.parent, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.parent, -self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.parent, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.parent, self.coeffs * complex(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return alg_mul(self.parent, self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.parent, self.coeffs / complex(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.parent.unit()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def matrix(self) -> np.ndarray:
        return np.tensordot(self.coeffs, self.parent._left, axes=(0, 0))

    def scalar_part(self) -> complex:
        """Coefficient of the unit (well defined for the degree-0 part)."""
        return complex(self.coeffs[self.parent.unit_index])

    def split(self) -> tuple[complex, "AlgebraElement"]:
        c = self.scalar_part()
        return c, self - c

    def nilpotency_index(self) -> int:
        """An exponent k with self**k == 0 (dim + 1 if not nilpotent).

        For elements supported in positive degree of an undeformed ring the
        degree bound is used; otherwise powers are tested.
        """
        A = self.parent
        support = [A.degrees[i] for i in np.nonzero(self.coeffs)[0]]
        if not support:
            return 1
        if not A.q_deformed and min(support) > 0:
            return A.top_degree // min(support) + 1
        p = self
        for k in range(1, self.parent.dim + 2):
            if np.abs(p.coeffs).max() < 1e-300:
                return k
            p = p * self
        return self.parent.dim + 1

    def apply(self, germ) -> "AlgebraElement":
        """f(self) for a germ, Taylor-expanded at the scalar part.

        Requires the non-scalar part to be nilpotent, which holds for
        positive-degree classes in a classical cohomology ring.
        """
        if not isinstance(germ, Germ):
            germ = CoefficientGerm(germ)
        c, n = self.split()
        k = n.nilpotency_index()
        if k > self.parent.dim:
            raise ConfigError("non-scalar part is not nilpotent")
        coeffs = germ.taylor(k, c)
        out = self.parent.zero()
        p = self.parent.unit()
        for a in coeffs:
            out = out + a * p
            p = p * n
        return out

    def inverse(self) -> "AlgebraElement":
        c, n = self.split()
        if n.nilpotency_index() <= self.parent.dim:
            if c == 0:
                raise ZeroDivisionError("nilpotent element is not invertible")
            out = self.parent.unit()
            term = self.parent.unit()
            u = n / c
            for _ in range(self.parent.dim):
                term = -(term * u)
                out = out + term
            return out / c
        M = self.matrix()
        try:
            sol = np.linalg.solve(M, self.parent.unit().coeffs)
        except np.linalg.LinAlgError as exc:
            raise ZeroDivisionError("element is not invertible") from exc
        return AlgebraElement(self.parent, sol)

    def allclose(self, other, tol: float = 1e-12) -> bool:
        o = self._coerce(other)
        return bool(np.abs(self.coeffs - o.coeffs).max() <= tol)

    def __repr__(self):
        terms = [f"({c:.6g})*{lab}" for c, lab in zip(self.coeffs, self.parent.basis_labels) if abs(c) > 1e-14]
        return " + ".join(terms) if terms else "0"


def alg_mul(A: GradedAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.parent is not A or y.parent is not A:
        raise ConfigError("elements belong to different algebras")
    return AlgebraElement(A, np.einsum("i,ijk,j->k", x.coeffs, A.struct_consts, y.coeffs))


def alg_integrate(A: GradedAlgebra, x: AlgebraElement) -> complex:
    if A.top_index is None:
        raise ConfigError("algebra has no designated top class")
    if x.parent is not A:
        raise ConfigError("element belongs to a different algebra")
    return complex(x.coeffs[A.top_index])


def mult_operator_matrix(A: GradedAlgebra, x: AlgebraElement) -> np.ndarray:
    if x.parent is not A:
        raise ConfigError("element belongs to a different algebra")
    return x.matrix()


def tensor_algebra(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Tensor product with basis ordered (a, b) -> a * B.dim + b."""
    c = np.einsum("ijk,lmn->iljmkn", A.struct_consts, B.struct_consts)
    n = A.dim * B.dim
    labels = []
    for la, lb in itertools.product(A.basis_labels, B.basis_labels):
        if la == "1":
            labels.append(lb)
        elif lb == "1":
            labels.append(la)
        else:
            labels.append(f"{la}*{lb}")
    degrees = [da + db for da, db in itertools.product(A.degrees, B.degrees)]
    top = None
    if A.top_index is not None and B.top_index is not None:
        top = A.top_index * B.dim + B.top_index
    return GradedAlgebra(labels, degrees, c.reshape(n, n, n), A.unit_index * B.dim + B.unit_index,
                         top, A.q_deformed or B.q_deformed)


# -- jets ---------------------------------------------------------------------

class Jet:
    """Truncated power series in nilpotent generators e_i with e_i**orders[i] == 0.

    Coefficients live in a dense array of shape ``orders``.
    """

    __slots__ = ("orders", "coeffs")

    def __init__(self, orders: Sequence[int], coeffs=None):
        self.orders = tuple(int(o) for o in orders)
        if any(o < 1 for o in self.orders):
            raise ConfigError("jet orders must be >= 1")
        if coeffs is None:
            arr = np.zeros(self.orders, complex)
        elif isinstance(coeffs, dict):
            arr = np.zeros(self.orders, complex)
            for idx, v in coeffs.items():
                idx = tuple(idx) if not np.isscalar(idx) else (idx,)
                if all(i < o for i, o in zip(idx, self.orders)):
                    arr[idx] += v
        else:
            arr = np.array(coeffs, complex).reshape(self.orders)
        self.coeffs = arr

    @property
    def nvars(self) -> int:
        return len(self.orders)

    @classmethod
    def constant(cls, orders, c: complex) -> "Jet":
        j = cls(orders)
        j.coeffs[(0,) * len(j.orders)] = c
        return j

    @classmethod
    def variable(cls, orders, i: int, scale: complex = 1.0, shift: complex = 0.0) -> "Jet":
        j = cls.constant(orders, shift)
        if j.orders[i] > 1:
            idx = [0] * len(j.orders)
            idx[i] = 1
            j.coeffs[tuple(idx)] += scale
        return j

    @property
    def total_order(self) -> int:
        """Powers of a jet without constant term vanish from this exponent on."""
        return sum(o - 1 for o in self.orders) + 1

    def constant_term(self) -> complex:
        return complex(self.coeffs[(0,) * self.nvars])

    def to_dict(self, tol: float = 0.0) -> dict:
        return {idx: complex(v) for idx, v in np.ndenumerate(self.coeffs) if abs(v) > tol}

    def _check(self, other: "Jet"):
        if other.orders != self.orders:
            raise ConfigError("jets have different truncation orders")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.orders, self.coeffs + other.coeffs)
        out = Jet(self.orders, self.coeffs.copy())
        out.coeffs[(0,) * self.nvars] += other
        return out

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.orders, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.orders, self.coeffs * complex(other))
        self._check(other)
        return Jet(self.orders, _mul_ext(self.coeffs, other.coeffs, self.orders).astype(complex))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return Jet(self.orders, self.coeffs / complex(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Jet.constant(self.orders, 1.0)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Jet":
        return _jet_inverse(self)

    def apply(self, germ) -> "Jet":
        return jet_apply_analytic(germ, self)

    def allclose(self, other: "Jet", tol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.abs(self.coeffs - other.coeffs).max() <= tol)

    def max_diff(self, other: "Jet") -> float:
        self._check(other)
        return float(np.abs(self.coeffs - other.coeffs).max())

    def __repr__(self):
        return f"Jet(orders={self.orders}, {self.to_dict(1e-15)})"


def _mul_ext(a, b, orders) -> np.ndarray:
    """Truncated product of coefficient arrays, accumulated in extended precision.

    Jet identities are checked at 1e-12 on coefficients of size ~1e2 with
    heavy cancellation, which double-precision accumulation cannot meet.
    """
    out = np.zeros(orders, np.clongdouble)
    rhs = np.asarray(b).astype(np.clongdouble)
    a = np.asarray(a)
    for idx in zip(*np.nonzero(a)):
        v = np.clongdouble(a[idx])
        src = tuple(slice(0, o - i) for i, o in zip(idx, orders))
        dst = tuple(slice(i, o) for i, o in zip(idx, orders))
        out[dst] += v * rhs[src]
    return out


def _jet_inverse(j: Jet) -> Jet:
    c = j.constant_term()
    if c == 0:
        raise ZeroDivisionError("jet with zero constant term is not invertible")
    n = (j - c) / c
    out = Jet.constant(j.orders, 1.0)
    term = Jet.constant(j.orders, 1.0)
    for _ in range(1, j.total_order):
        term = -(term * n)
        out = out + term
    return out / c


def jet_apply_analytic(germ, j: Jet) -> Jet:
    """Compose an analytic germ with a jet, recentering at the constant term.

    ``germ`` is a :class:`Germ` or a plain coefficient sequence (expanded at 0;
    a plain sequence needs a zero constant term in ``j``).
    """
    if not isinstance(germ, Germ):
        germ = CoefficientGerm(germ)
    c = j.constant_term()
    K = j.total_order
    coeffs = germ.taylor(K, c)
    if len(coeffs) < K:
        raise ValueError(f"insufficient germ coefficients: need {K}, have {len(coeffs)}")
    n = (j - c).coeffs
    out = np.zeros(j.orders, np.clongdouble)
    out[(0,) * j.nvars] = coeffs[0]
    p = np.zeros(j.orders, np.clongdouble)
    p[(0,) * j.nvars] = 1
    for a in coeffs[1:]:
        p = _mul_ext(n, p, j.orders)
        if a != 0:
            out += p * np.clongdouble(a)
    return Jet(j.orders, out.astype(complex))


# -- eigenvalue multisets -------------------------------------------------------

@dataclass
class EigenMultiset:
    pairs: list = field(default_factory=list)
    cluster_tol: float = 0.0

    @property
    def size(self) -> int:
        return sum(m for _, m in self.pairs)

    def values(self) -> np.ndarray:
        """Flattened values with repetition."""
        return np.array([v for v, m in self.pairs for _ in range(m)], dtype=complex)

    def multiplicity_of(self, value: complex, tol: float | None = None) -> int:
        tol = self.cluster_tol if tol is None else tol
        return sum(m for v, m in self.pairs if abs(v - value) <= tol)

    def to_json(self) -> list:
        return [{"value": [float(v.real), float(v.imag)], "multiplicity": int(m)} for v, m in self.pairs]


def _single_link(vals: np.ndarray, tol: float) -> list:
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            if abs(vals[i] - vals[k]) <= tol:
                parent[find(i)] = find(k)
    comps: dict[int, list] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return list(comps.values())


def cluster_values(vals, cluster_tol: float, matrix_norm: float | None = None) -> EigenMultiset:
    """Group eigenvalues into a multiset.

    Values closer than ``cluster_tol`` always merge.  With ``matrix_norm``
    given, a group of m values also counts as one eigenvalue when its
    diameter is within 4 (eps * norm)^(1/m), the spread of a perturbed m x m
    Jordan block; the group mean is then a well-conditioned estimate.
    Groups are accepted from the loosest level (m = n) downwards.
    """
    vals = np.asarray(vals, complex)
    eps = np.finfo(float).eps

    def allowed(m):
        if matrix_norm is None or m <= 1:
            return cluster_tol
        return max(cluster_tol, 4.0 * (eps * max(matrix_norm, 1.0)) ** (1.0 / m))

    remaining = np.arange(len(vals))
    groups = []
    for m in range(len(vals), 0, -1):
        if len(remaining) == 0:
            break
        sub = vals[remaining]
        keep = []
        for comp in _single_link(sub, allowed(m)):
            pts = sub[comp]
            diam = np.abs(pts[:, None] - pts[None, :]).max()
            if m == 1 or (len(comp) <= m and diam <= allowed(len(comp))):
                groups.append(pts)
            else:
                keep.extend(comp)
        remaining = remaining[np.array(sorted(keep), dtype=int)] if keep else np.array([], dtype=int)
    pairs = [(complex(np.mean(g)), len(g)) for g in groups]
    pairs.sort(key=lambda p: (round(p[0].real, 8), round(p[0].imag, 8)))
    return EigenMultiset(pairs, cluster_tol)


def eigen_multiset(M, cluster_tol: float | None = None) -> EigenMultiset:
    M = np.asarray(M, complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ConfigError("eigen_multiset needs a square matrix")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has non-finite entries")
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solver did not converge: {exc}") from exc
    if cluster_tol is None:
        cluster_tol = 1e-6 * (1 + (np.abs(vals).max() if len(vals) else 0.0))
    return cluster_values(vals, cluster_tol, float(np.linalg.norm(M)))


def match_multisets(a: EigenMultiset, b: EigenMultiset) -> float:
    """Largest distance in an optimal one-to-one matching of two multisets.

    A greedy nearest-neighbour pass is tried first; if any greedy choice was
    ambiguous (two candidates within twice the chosen distance) the optimal
    assignment is used instead.
    """
    x, y = a.values(), b.values()
    if len(x) != len(y):
        return float("inf")
    if len(x) == 0:
        return 0.0
    D = np.abs(x[:, None] - y[None, :])
    used = np.zeros(len(y), bool)
    worst = 0.0
    ambiguous = False
    for i in range(len(x)):
        d = np.where(used, np.inf, D[i])
        order = np.argsort(d)
        k = order[0]
        if len(order) > 1 and np.isfinite(d[order[1]]) and d[order[1]] <= 2 * d[k] + 1e-12 and y[order[1]] != y[k]:
            ambiguous = True
        used[k] = True
        worst = max(worst, d[k])
    if ambiguous:
        rows, cols = linear_sum_assignment(D)
        worst = float(D[rows, cols].max())
    return float(worst)
