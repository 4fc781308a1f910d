"""hashlab: tabulation-family hash functions with a seeded reproducible
build, range mapping, bottom-k stream sketches, and a quality/timing lab."""

from .errors import (
    HashlabError,
    InvalidDescriptor,
    InvalidParams,
    SeedMismatch,
    Underfull,
    UnsupportedConfig,
)
from .hashers import (
    SCHEMES,
    SchemeDescriptor,
    build,
    descriptor_for,
    dump_tables,
    hash_with_read_count,
)
from .ranging import BinMap, Interval, dyadic_decompose, in_interval, weight_in_interval
from .seeding import make_generator, parse_seed, random_permutation, seed_to_hex
from .streams import (
    BottomKSketch,
    PowTwoSketch,
    estimate_distinct_median,
    fraction_of,
    jaccard,
    merge_union,
    sketch_of,
    split_hash_bits,
    stream_distinct,
)

__version__ = "0.1.0"

__all__ = [
    "HashlabError",
    "InvalidDescriptor",
    "InvalidParams",
    "SeedMismatch",
    "Underfull",
    "UnsupportedConfig",
    "SCHEMES",
    "SchemeDescriptor",
    "build",
    "descriptor_for",
    "dump_tables",
    "hash_with_read_count",
    "BinMap",
    "Interval",
    "dyadic_decompose",
    "in_interval",
    "weight_in_interval",
    "make_generator",
    "parse_seed",
    "random_permutation",
    "seed_to_hex",
    "BottomKSketch",
    "PowTwoSketch",
    "estimate_distinct_median",
    "fraction_of",
    "jaccard",
    "merge_union",
    "sketch_of",
    "split_hash_bits",
    "stream_distinct",
    "__version__",
]
