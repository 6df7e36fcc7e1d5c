"""scikit-learn style wrappers around the quotient construction.

``fit`` learns a finite quotient from a finite set of group elements and
``transform`` sends further elements through the learned map.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .charcore import DEFAULT_MAX_HOMS
from .permgroup import DEFAULT_MAX_DEGREE
from .semidirect import DEFAULT_SAMPLE_SIZE, theorem1_pipeline, verify_certificate
from .separation import JOINT, PER_WORD, separate
from .validation import check_elements, check_group


class SemidirectQuotient(TransformerMixin, BaseEstimator):
    """Quotient ``pi: K ⋊ Q -> N ⋊ Q`` with finite ``N``, injective on the fitted set.

    Parameters
    ----------
    group : Semidirect or dict
        The product ``G``; JSON descriptors are accepted.
    compute_order : bool, default=False
        Compute ``|N|``, i.e. the index of Q in the quotient.
    max_homs : int, default=20000
    max_degree : int, default=10**6
    seed : int, default=0
        Seed for the sampled multiplicativity check.
    sample_size : int, default=200
    separation : {"per-word", "joint"}, default="per-word"
    include_identity : bool, default=True

    Attributes
    ----------
    certificate_ : Certificate
    quotient_group_ : Semidirect
        ``G1 = N ⋊ Q``.
    witness_ : FiniteIndexWitness
    n_quotient_ : int or None
        ``|N|`` when ``compute_order`` is set.
    """

    def __init__(
        self,
        group=None,
        compute_order=False,
        max_homs=DEFAULT_MAX_HOMS,
        max_degree=DEFAULT_MAX_DEGREE,
        seed=0,
        sample_size=DEFAULT_SAMPLE_SIZE,
        separation=PER_WORD,
        include_identity=True,
    ):
        self.group = group
        self.compute_order = compute_order
        self.max_homs = max_homs
        self.max_degree = max_degree
        self.seed = seed
        self.sample_size = sample_size
        self.separation = separation
        self.include_identity = include_identity

    def fit(self, X, y=None):
        G = check_group(self.group, semidirect=True)
        S = check_elements(G, X)
        cert = theorem1_pipeline(
            G,
            S,
            compute_order=self.compute_order,
            max_homs=self.max_homs,
            max_degree=self.max_degree,
            seed=self.seed,
            sample_size=self.sample_size,
            separation=self.separation,
            include_identity=self.include_identity,
        )
        self.group_ = G
        self.certificate_ = cert
        self.quotient_group_ = cert.G1
        self.witness_ = cert.witness
        self.n_quotient_ = cert.order
        return self

    def transform(self, X):
        check_is_fitted(self, "certificate_")
        return [self.certificate_.pi(g) for g in check_elements(self.group_, X)]

    def verify(self):
        """Independent re-check of the fitted certificate."""
        check_is_fitted(self, "certificate_")
        return verify_certificate(self.certificate_.to_json())


class FiniteQuotientSeparator(TransformerMixin, BaseEstimator):
    """Finite quotient of a free, free abelian or finite group that keeps ``X`` nontrivial."""

    def __init__(self, group=None, strategy=JOINT):
        self.group = group
        self.strategy = strategy

    def fit(self, X, y=None):
        K = check_group(self.group)
        self.group_ = K
        self.witness_ = separate(K, check_elements(K, X), strategy=self.strategy)
        return self

    def transform(self, X):
        check_is_fitted(self, "witness_")
        return [self.witness_.phi(a) for a in check_elements(self.group_, X)]
