"""Input checking shared by the estimators and the command line."""
from __future__ import annotations

from .errors import InputError
from .groups import Group, Semidirect, ball, descriptor_from_json


def check_group(group, semidirect=False):
    """Return a :class:`Group` from a descriptor object or its JSON form."""
    if group is None:
        raise InputError("no group given")
    if isinstance(group, dict):
        group = descriptor_from_json(group)
    if not isinstance(group, Group):
        raise InputError(f"expected a group descriptor, got {type(group).__name__}")
    if semidirect and not isinstance(group, Semidirect):
        raise InputError("a semidirect product descriptor is required")
    return group


def check_elements(group, X):
    """Canonical elements of ``group`` from Python values or JSON lists.

    Semidirect elements given as 2-lists are converted to pairs of tuples.
    """
    if X is None:
        raise InputError("no elements given")
    try:
        items = list(X)
    except TypeError:
        raise InputError("elements must be an iterable") from None
    out = []
    for a in items:
        try:
            out.append(group.validate(a))
        except InputError:
            out.append(group.element_from_json(a))
    return out


def seed_elements(G, spec):
    """Elements listed explicitly, or ``{"ball": {"radius": r, "in": "G" | "K"}}``."""
    if isinstance(spec, dict) and "ball" in spec:
        b = spec["ball"]
        radius = b.get("radius", 1)
        where = b.get("in", "G")
        if where == "K":
            eq = G.Q.identity()
            return [(k, eq) for k in ball(G.K, radius)]
        if where == "G":
            return ball(G, radius)
        raise InputError(f"ball must be taken in 'G' or 'K', got {where!r}")
    if not isinstance(spec, list):
        raise InputError("S must be a list of elements or a ball specification")
    return [G.element_from_json(x) for x in spec]
