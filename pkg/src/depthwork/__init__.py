"""Relational-depth workbench for ideals of PT_n, T_n, and I_n."""

from .budgets import Budgets
from .congruence import CongruenceTable, enumerate_quotient
from .ideals import (
    IdealSpec,
    JChain,
    depth_of_class,
    ideal_elements,
    ideal_size,
    l_related,
    r_related,
)
from .maps import (
    Family,
    PartialMap,
    all_maps,
    all_of_rank,
    compose,
    domain,
    image,
    kernel_classes,
    member,
    rank,
)
from .presentations import (
    Presentation,
    TietzeError,
    cayley,
    generator_order,
    restriction,
    tietze,
)
from .rewriting import RewritingSystem, knuth_bendix

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "CongruenceTable",
    "Family",
    "IdealSpec",
    "JChain",
    "PartialMap",
    "Presentation",
    "RewritingSystem",
    "TietzeError",
    "all_maps",
    "all_of_rank",
    "cayley",
    "compose",
    "depth_of_class",
    "domain",
    "enumerate_quotient",
    "generator_order",
    "ideal_elements",
    "ideal_size",
    "image",
    "kernel_classes",
    "knuth_bendix",
    "l_related",
    "member",
    "r_related",
    "rank",
    "restriction",
    "tietze",
]
