"""scikit-learn style wrappers so the pipeline composes in a `Pipeline`.

Each step takes and returns a `Field2D`; hyper-parameters live in the
constructor, and ``fit`` validates them and precomputes what it can::

    Pipeline([
        ("extend", BrtExtender(xi_j=np.pi / 11, m_t=48, m_y=48)),
        ("filter", PsfFilter(xi_i=np.pi, xi_j=np.pi / 11, crop_grid=grid)),
        ("invert", TikhonovBrtInverter(xi_i=np.pi, xi_j=np.pi / 11, epsilon=1e-5)),
    ])
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_angle, check_count, check_field, check_non_negative, check_positive
from .core.geometry import FilterSpec, check_pair, as_direction
from .extend import ExtensionPlan, brt_extend, embed
from .experiments import extended_grid
from .filtering import DEFAULT_SHIFT_SAMPLES, apply_psf
from .invert import compute_K, recover_blurred
from .spectral import dft2, idft2


class BrtExtender(TransformerMixin, BaseEstimator):
    """Extend truncated data with ``theta_i = (-1, 0)`` onto a padded grid.

    The output grid adds ``m_t`` columns on both sides and ``m_y`` rows on
    both sides, so fields for either sign of ``xi_j`` share a layout.
    """

    def __init__(self, xi_j=0.3, m_t=32, m_y=32, p=16, corner_rtol=1e-9):
        self.xi_j = xi_j
        self.m_t = m_t
        self.m_y = m_y
        self.p = p
        self.corner_rtol = corner_rtol

    def fit(self, X, y=None):
        check_angle(self.xi_j, "xi_j")
        self.plan_ = ExtensionPlan(check_count(self.m_t, "m_t"), check_count(self.m_y, "m_y"),
                                   check_count(self.p, "p"))
        check_non_negative(self.corner_rtol, "corner_rtol")
        if X is not None:
            self.input_grid_ = check_field(X).grid
        return self

    def transform(self, X):
        X = check_field(X)
        E = brt_extend(X, self.xi_j, self.plan_, self.corner_rtol)
        return embed(E, extended_grid(X.grid, self.plan_))


class PsfFilter(TransformerMixin, BaseEstimator):
    """Four-impulse PSF filtering; optionally crop the result to ``crop_grid``.

    ``a_i``/``a_j`` default to ``8 * max(dt, dy)`` of the fitted grid.
    """

    def __init__(self, xi_i=3.141592653589793, xi_j=0.3, a_i=None, a_j=None, crop_grid=None, p=None):
        self.xi_i = xi_i
        self.xi_j = xi_j
        self.a_i = a_i
        self.a_j = a_j
        self.crop_grid = crop_grid
        self.p = p

    def fit(self, X, y=None):
        X = check_field(X)
        xi_i, xi_j = check_angle(self.xi_i, "xi_i"), check_angle(self.xi_j, "xi_j")
        check_pair(as_direction(xi_i), as_direction(xi_j))
        default = DEFAULT_SHIFT_SAMPLES * max(X.grid.dt, X.grid.dy)
        a_i = check_positive(self.a_i, "a_i", allow_none=True) or default
        a_j = check_positive(self.a_j, "a_j", allow_none=True) or default
        self.spec_ = FilterSpec(xi_i, xi_j, a_i, a_j)
        return self

    def transform(self, X):
        X = check_field(X)
        out = apply_psf(X, self.spec_, self.p)
        return out.crop_to(self.crop_grid) if self.crop_grid is not None else out


class TikhonovBrtInverter(TransformerMixin, BaseEstimator):
    """Regularised frequency-domain inversion of filtered data.

    ``fit`` builds the reciprocal spectrum ``K_`` for the grid of ``X``;
    ``transform`` applies it (rebuilding it if the grid changed).
    """

    def __init__(self, xi_i=3.141592653589793, xi_j=0.3, epsilon=1e-5):
        self.xi_i = xi_i
        self.xi_j = xi_j
        self.epsilon = epsilon

    def fit(self, X, y=None):
        X = check_field(X)
        check_angle(self.xi_i, "xi_i")
        check_angle(self.xi_j, "xi_j")
        check_non_negative(self.epsilon, "epsilon")
        self.grid_ = X.grid
        self.K_ = compute_K(X.grid, self.xi_i, self.xi_j, self.epsilon)
        return self

    def transform(self, X):
        X = check_field(X)
        if X.grid != self.grid_:
            self.fit(X)
        spec = dft2(X)
        out = idft2(spec.with_coeffs(spec.coeffs * self.K_))
        return out.with_values(out.values, kind="filtered-image", epsilon=float(self.epsilon))


class BlurredImageRecovery(TransformerMixin, BaseEstimator):
    """Parallelogram-blurred image from filtered data (single integration).

    The data carry no information about the image mean; pass ``mean`` to
    restore it, otherwise the result has zero mean.
    """

    def __init__(self, xi_i=3.141592653589793, xi_j=0.3, a_i=None, a_j=None, epsilon=0.0, mean=None):
        self.xi_i = xi_i
        self.xi_j = xi_j
        self.a_i = a_i
        self.a_j = a_j
        self.epsilon = epsilon
        self.mean = mean

    def fit(self, X, y=None):
        X = check_field(X)
        default = DEFAULT_SHIFT_SAMPLES * max(X.grid.dt, X.grid.dy)
        self.spec_ = FilterSpec(check_angle(self.xi_i, "xi_i"), check_angle(self.xi_j, "xi_j"),
                                check_positive(self.a_i, "a_i", allow_none=True) or default,
                                check_positive(self.a_j, "a_j", allow_none=True) or default)
        check_non_negative(self.epsilon, "epsilon")
        return self

    def transform(self, X):
        return recover_blurred(check_field(X), self.spec_, self.epsilon, mean=self.mean)
