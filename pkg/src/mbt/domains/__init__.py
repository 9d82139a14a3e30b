"""Reference domains and the registry that resolves domain_id strings."""

from __future__ import annotations

from functools import lru_cache

from ..errors import DomainError, UnknownDomain
from . import hypostrat, polyeq, sumreduce
from .base import DomainContract
from .hypostrat import HypoStratParams

__all__ = [
    "DomainContract",
    "HypoStratParams",
    "available_domains",
    "get_domain",
    "hypostrat",
    "polyeq",
    "sumreduce",
]


def available_domains() -> list[str]:
    return ["sumreduce", "polyeq", "hypostrat:<n>:<k>:<seed>"]


@lru_cache(maxsize=64)
def get_domain(domain_id: str) -> DomainContract:
    if domain_id == "sumreduce":
        return sumreduce.make_domain()
    if domain_id == "polyeq":
        return polyeq.make_domain()
    if domain_id.startswith("hypostrat:"):
        parts = domain_id.split(":")
        if len(parts) != 4:
            raise UnknownDomain(domain_id)
        try:
            params = HypoStratParams(n=int(parts[1]), k=int(parts[2]), seed=int(parts[3]))
        except (ValueError, DomainError):
            raise UnknownDomain(domain_id) from None
        return hypostrat.make_domain(params)
    raise UnknownDomain(domain_id)
