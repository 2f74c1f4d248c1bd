"""q-deformed elementary functions: q-numbers, q-exponentials, q-logarithms.

All series and products here converge geometrically in their stated domains,
and every truncation carries an a-priori tail bound, so results are certified
to the policy tolerance or a :class:`~qvortex.errors.ConvergenceError` is
raised with the best bound achieved.

Conventions
-----------
* The deformation base is real with ``q > 1``; q-numbers are
  ``[n] = (q**n - 1)/(q - 1)``.
* :func:`q_log` takes the *series variable*: ``q_log(x, base)`` returns
  ``Ln_q(1 - x) = -sum_{n>=1} x**n / [n]``.  Call sites that need
  ``Ln_q(1 - u)`` pass ``u`` directly, which avoids silent sign errors.
* :func:`q_log_polesum` uses the shifted convention
  ``Ln_q(1 + z) = (q - 1) * sum_{n>=1} z / (q**n + z)``; the two functions
  agree through ``q_log(x) == q_log_polesum(-x)``.
* ``E_q(z) = sum z**n/[n]!`` is entire for ``q > 1``;
  ``E_q*(z) = sum q**(n(n-1)/2) z**n/[n]!`` converges for ``|z| < 1`` when
  the base exceeds 1 and is entire for bases in (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import ConvergenceError, DomainError, PoleProximityError, RangeError

# Bases this close to 1 make (q**n - 1)/(q - 1) catastrophically ill
# conditioned; q -> 1 limits are approached from above in tests instead.
_MIN_BASE_GAP = 1e-9

# Relative pole-proximity threshold for the q-logarithm pole sum.
_POLE_RTOL = 1e-9


@dataclass(frozen=True)
class QBase:
    """Deformation base, restricted to q > 1.

    The reciprocal regime (bases in (0, 1), used by the theta-function
    composition) is reached by passing a bare float to the functions that
    support it; it is never stored here.
    """

    q: float

    def __post_init__(self):
        q = self.q
        if not math.isfinite(q):
            raise DomainError(f"base must be finite, got {q!r}")
        if q <= 1.0 + _MIN_BASE_GAP:
            raise DomainError(
                f"base must exceed 1 + {_MIN_BASE_GAP:g} (got {q!r}); "
                "q-numbers are ill conditioned for q ~ 1"
            )

    @property
    def reciprocal_sq(self) -> float:
        """The derived base 1/q in (0, 1), e.g. the squared theta nome."""
        return 1.0 / self.q


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs and tolerances governing all infinite sums and products.

    ``abs_tol == 0`` means "sum exactly ``max_terms`` terms"; otherwise the
    tail bound must drop below ``abs_tol`` within the term budget.
    ``image_pairs`` is the lattice/cascade depth per direction used by the
    flow assembly.
    """

    max_terms: int = 200
    abs_tol: float = 1e-12
    image_pairs: int = 40

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.image_pairs < 1:
            raise DomainError(f"image_pairs must be >= 1, got {self.image_pairs}")
        if self.abs_tol < 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")


DEFAULT_POLICY = TruncationPolicy()

BaseLike = Union[QBase, float, int]


def _qval(base: BaseLike) -> float:
    if isinstance(base, QBase):
        return base.q
    return QBase(float(base)).q


def _policy(policy: TruncationPolicy | None) -> TruncationPolicy:
    return DEFAULT_POLICY if policy is None else policy


def q_number(n: int, base: BaseLike) -> float:
    """[n] = 1 + q + ... + q**(n-1) = (q**n - 1)/(q - 1); zero for n = 0."""
    q = _qval(base)
    if n < 0:
        raise DomainError(f"q-number index must be >= 0, got {n}")
    if n == 0:
        return 0.0
    # incremental power: float multiplication overflows to inf, which
    # propagates harmlessly, unlike ** which raises OverflowError
    qn = 1.0
    for _ in range(n):
        qn *= q
    return (qn - 1.0) / (q - 1.0)


def q_factorial(n: int, base: BaseLike) -> float:
    """[n]! = [1][2]...[n]; 1 for n = 0.  Raises RangeError on overflow."""
    q = _qval(base)
    if n < 0:
        raise DomainError(f"q-factorial index must be >= 0, got {n}")
    out = 1.0
    qn = 1.0
    for k in range(1, n + 1):
        qn *= q
        out *= (qn - 1.0) / (q - 1.0)
        if math.isinf(out) or math.isinf(qn):
            raise RangeError(f"[{n}]! overflows the double range at k={k} (q={q})")
    return out


def q_derivative(f: Callable[[complex], complex], z: complex, base: BaseLike) -> complex:
    """D_q f(z) = (f(qz) - f(z)) / ((q - 1) z); undefined at z = 0."""
    q = _qval(base)
    z = complex(z)
    if z == 0:
        raise DomainError("q-derivative difference quotient is undefined at z = 0")
    return (f(q * z) - f(z)) / ((q - 1.0) * z)


def q_log(x: complex, base: BaseLike, policy: TruncationPolicy | None = None) -> complex:
    """q-logarithm Ln_q(1 - x) = -sum_{n>=1} x**n / [n], for |x| < q.

    The terms decay at least geometrically with ratio |x|/q (because
    [n+1] > q [n]), so the tail after N terms is bounded by
    |x|**(N+1)/([N+1] (1 - |x|/q)).

    Parameters
    ----------
    x : complex
        Series variable; the function value is Ln_q(1 - x).
    base : QBase or float
        Deformation base, q > 1.
    policy : TruncationPolicy, optional
        Term budget and tolerance; module default if omitted.
    """
    q = _qval(base)
    pol = _policy(policy)
    x = complex(x)
    ax = abs(x)
    if ax >= q:
        raise DomainError(f"q-logarithm series requires |x| < q (|x|={ax:g}, q={q:g})")
    if ax == 0.0:
        return 0j
    ratio = ax / q
    acc = 0j
    xp = 1 + 0j
    qn = 1.0
    tail = math.inf
    for n in range(1, pol.max_terms + 1):
        xp *= x
        qn *= q
        acc += xp * (q - 1.0) / (qn - 1.0)
        if pol.abs_tol > 0.0:
            # |t_{n+1}| / (1 - ratio), with [n+1] = (qn*q - 1)/(q - 1)
            tail = abs(xp) * ax * (q - 1.0) / ((qn * q - 1.0) * (1.0 - ratio))
            if tail <= pol.abs_tol:
                return -acc
    if pol.abs_tol == 0.0:
        return -acc
    raise ConvergenceError(
        f"q_log needed more than {pol.max_terms} terms for tolerance "
        f"{pol.abs_tol:g} (tail bound {tail:g})",
        achieved_bound=tail, terms_used=pol.max_terms,
    )


def _check_poles(z: complex, q: float) -> None:
    # poles of the pole sum sit at z = -q**n, n >= 1
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    az = abs(z)
    qn = 1.0
    n = 1
    while True:
        qn *= q
        if abs(z + qn) < _POLE_RTOL * qn:
            raise PoleProximityError(
                f"z={z!r} is within {_POLE_RTOL:g} (relative) of the pole -q**{n}",
                index=n, pole=complex(-qn),
            )
        if qn * (1.0 - _POLE_RTOL) > az:
            return
        n += 1


def q_log_polesum(z: complex, base: BaseLike, policy: TruncationPolicy | None = None) -> complex:
    """Ln_q(1 + z) via the pole sum (q - 1) * sum_{n>=1} z / (q**n + z).

    Converges geometrically with ratio 1/q for every z away from the poles
    -q**n, which makes it the preferred evaluation when |z| approaches q
    (there the power series of :func:`q_log` slows to a crawl).  Tail after
    N terms is bounded by |z| q**-N / (1 - |z| q**-(N+1)).
    """
    q = _qval(base)
    pol = _policy(policy)
    z = complex(z)
    _check_poles(z, q)
    az = abs(z)
    if az >= q:
        raise DomainError(f"q-logarithm pole sum requires |z| < q (|z|={az:g}, q={q:g})")
    if az == 0.0:
        return 0j
    acc = 0j
    qn = 1.0
    tail = math.inf
    for n in range(1, pol.max_terms + 1):
        qn *= q
        acc += z / (qn + z)
        if pol.abs_tol > 0.0:
            denom = 1.0 - az / (qn * q)
            tail = az / qn / denom
            if tail <= pol.abs_tol:
                return (q - 1.0) * acc
    if pol.abs_tol == 0.0:
        return (q - 1.0) * acc
    raise ConvergenceError(
        f"q_log_polesum needed more than {pol.max_terms} terms for tolerance "
        f"{pol.abs_tol:g} (tail bound {tail:g})",
        achieved_bound=tail, terms_used=pol.max_terms,
    )


def q_log_1m(u: complex, base: BaseLike, policy: TruncationPolicy | None = None) -> complex:
    """Ln_q(1 - u) evaluated through the pole sum: q_log_polesum(-u).

    Convenience used by the flow and dynamics closed forms, where arguments
    routinely lie in (1, q) and the pole sum keeps full accuracy.
    """
    return q_log_polesum(-complex(u), base, policy)


def q_log_truncated(z: complex, base: BaseLike, n_terms: int) -> tuple[complex, float]:
    """N-term pole-sum value of Ln_q(1 + z) with a certified remainder bound.

    Returns ``(value, bound)`` where ``value = (q-1) z sum_{n<=N} 1/(q**n+z)``
    and ``bound >= |Ln_q(1+z) - value|``.  The remainder expands as
    ``(q-1) sum_k (-1)**(k-1) z**k / (q**(N k) (q**k - 1))``, which with
    u = |z|/q**N gives the bound u / (1 - u).
    """
    q = _qval(base)
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms}")
    z = complex(z)
    _check_poles(z, q)
    az = abs(z)
    if az >= q:
        raise DomainError(f"q-logarithm pole sum requires |z| < q (|z|={az:g}, q={q:g})")
    if az == 0.0:
        return 0j, 0.0
    acc = 0j
    qn = 1.0
    for _ in range(n_terms):
        qn *= q
        acc += z / (qn + z)
    u = az / qn
    if u < 1.0:
        bound = u / (1.0 - u)
    else:
        # only reachable for n_terms = 1 with |z| close to q; fall back to
        # the direct geometric estimate, valid because q**(N+1) > |z|
        bound = az / qn / (1.0 - az / (qn * q))
    return (q - 1.0) * acc, bound


def q_exp(z: complex, base: BaseLike, policy: TruncationPolicy | None = None) -> complex:
    """Jackson q-exponential E_q(z) = sum_{n>=0} z**n / [n]!, entire for q > 1.

    Term ratios |z|/[n+1] decrease monotonically, so once the next ratio
    drops below 1 the tail is bounded by |t_{n+1}|/(1 - ratio).
    """
    q = _qval(base)
    pol = _policy(policy)
    z = complex(z)
    az = abs(z)
    acc = 1 + 0j
    term = 1 + 0j
    qn = 1.0
    tail = math.inf
    for n in range(1, pol.max_terms + 1):
        qn *= q
        term *= z * (q - 1.0) / (qn - 1.0)
        acc += term
        if pol.abs_tol > 0.0:
            rho = az * (q - 1.0) / (qn * q - 1.0)  # |z| / [n+1]
            if rho < 1.0:
                tail = abs(term) * rho / (1.0 - rho)
                if tail <= pol.abs_tol:
                    return acc
    if pol.abs_tol == 0.0:
        return acc
    raise ConvergenceError(
        f"q_exp needed more than {pol.max_terms} terms for tolerance "
        f"{pol.abs_tol:g} (tail bound {tail:g})",
        achieved_bound=tail, terms_used=pol.max_terms,
    )


def q_exp_star(z: complex, base: BaseLike, policy: TruncationPolicy | None = None) -> complex:
    """Second Jackson q-exponential E_q*(z) = sum q**(n(n-1)/2) z**n / [n]!.

    Two base regimes are supported:

    * base > 1: converges for |z| < 1 (enforced as a domain error);
    * base in (0, 1): entire, thanks to the Gaussian decay of
      q**(n(n-1)/2).  This is the regime the theta-function composition
      uses, with base = (squared nome).
    """
    if isinstance(base, QBase):
        b = base.q
    else:
        b = float(base)
        if not math.isfinite(b) or b <= 0.0:
            raise DomainError(f"base must be positive and finite, got {b!r}")
        if abs(b - 1.0) <= _MIN_BASE_GAP:
            raise DomainError(f"base must be bounded away from 1, got {b!r}")
    pol = _policy(policy)
    z = complex(z)
    az = abs(z)
    if b > 1.0 and az >= 1.0:
        raise DomainError(
            f"E_q* with base > 1 converges only for |z| < 1 (got |z|={az:g})"
        )
    acc = 1 + 0j
    term = 1 + 0j
    bp = 1.0   # b**n
    bn = 1.0   # b**(n+1) power accumulator for [n+1]
    tail = math.inf
    for _ in range(pol.max_terms):
        bn *= b
        term *= (bp * z) * (b - 1.0) / (bn - 1.0)   # t_{n+1} = t_n b**n z/[n+1]
        acc += term
        bp *= b
        if pol.abs_tol > 0.0:
            rho = az * bp * (b - 1.0) / (bn * b - 1.0)  # next ratio, decreasing
            if rho < 1.0:
                tail = abs(term) * rho / (1.0 - rho)
                if tail <= pol.abs_tol:
                    return acc
    if pol.abs_tol == 0.0:
        return acc
    raise ConvergenceError(
        f"q_exp_star needed more than {pol.max_terms} terms for tolerance "
        f"{pol.abs_tol:g} (tail bound {tail:g})",
        achieved_bound=tail, terms_used=pol.max_terms,
    )


def q_exp_star_product(z: complex, base_lt1: float,
                       policy: TruncationPolicy | None = None) -> complex:
    """Product form E_q*(z) = prod_{k>=0} (1 + z q**k (1 - q)) for 0 < q < 1.

    Factors approach 1 geometrically; the product is truncated once the
    next factor deviates from 1 by less than the policy tolerance.
    """
    b = float(base_lt1)
    if not (0.0 < b < 1.0):
        raise DomainError(f"product form requires base in (0, 1), got {b!r}")
    pol = _policy(policy)
    z = complex(z)
    acc = 1 + 0j
    bk = 1.0
    dev = math.inf
    for _ in range(pol.max_terms):
        acc *= 1.0 + z * bk * (1.0 - b)
        bk *= b
        if pol.abs_tol > 0.0:
            dev = abs(z) * bk * (1.0 - b)
            if dev < pol.abs_tol:
                return acc
    if pol.abs_tol == 0.0:
        return acc
    raise ConvergenceError(
        f"q_exp_star_product needed more than {pol.max_terms} factors for "
        f"tolerance {pol.abs_tol:g} (next deviation {dev:g})",
        achieved_bound=dev, terms_used=pol.max_terms,
    )


def q_harmonic(base: BaseLike, policy: TruncationPolicy | None = None) -> float:
    """q-harmonic series H(q) = sum_{n>=1} 1/[n] = -Ln_q(0), q > 1.

    1/[n] <= q**(1-n), so the tail after N terms is below
    q**(1-N) / (q - 1).
    """
    q = _qval(base)
    pol = _policy(policy)
    acc = 0.0
    qn = 1.0
    tail = math.inf
    for _ in range(pol.max_terms):
        qn *= q
        acc += (q - 1.0) / (qn - 1.0)
        if pol.abs_tol > 0.0:
            tail = q / qn / (q - 1.0)
            if tail <= pol.abs_tol:
                return acc
    if pol.abs_tol == 0.0:
        return acc
    raise ConvergenceError(
        f"q_harmonic needed more than {pol.max_terms} terms for tolerance "
        f"{pol.abs_tol:g} (tail bound {tail:g})",
        achieved_bound=tail, terms_used=pol.max_terms,
    )


def q_harmonic_partial(base: BaseLike, n_terms: int) -> float:
    """q-harmonic number H_N(q) = sum_{n=1..N} 1/[n]."""
    q = _qval(base)
    if n_terms < 0:
        raise DomainError(f"n_terms must be >= 0, got {n_terms}")
    acc = 0.0
    qn = 1.0
    for _ in range(n_terms):
        qn *= q
        acc += (q - 1.0) / (qn - 1.0)
    return acc
