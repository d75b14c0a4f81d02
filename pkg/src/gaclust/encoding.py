"""Random-key chromosomes and their decoding into cluster labels.

A chromosome is one real gene in [0, 1) per point. Decoding splits the
key interval into k equal bins: label = floor(gene * k) + 1, so for two
clusters every gene below 0.5 maps to cluster 1 and the rest to cluster
2. Operators clamp their outputs to [0, GENE_MAX] to keep the domain
half-open.
"""

import numpy as np

from .errors import InvariantViolation

# Largest allowed gene. One ulp of slack below the top of [0, 1) so that
# floor(GENE_MAX * k) < k holds for every k in float64 arithmetic; the
# value 1 - 2**-53 would round up to exactly k for some k (for example 10).
GENE_MAX = 1.0 - 2.0**-52


def random_chromosome(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n independent uniform genes from [0, 1)."""
    if n < 1:
        raise InvariantViolation("chromosome length must be >= 1")
    return rng.random(n)


def validate_genes(genes: np.ndarray) -> None:
    """Raise when any gene leaves [0, 1); signals an operator bug."""
    if genes.ndim != 1 or genes.shape[0] == 0:
        raise InvariantViolation("chromosome must be a non-empty 1-D vector")
    if not np.all((genes >= 0.0) & (genes < 1.0)):
        raise InvariantViolation("gene outside [0, 1)")


def decode(genes: np.ndarray, k: int) -> np.ndarray:
    """Map genes to labels 1..k by equal-width bins.

    Total on valid chromosomes: genes in the last representable sliver of
    [0, 1) whose product with k rounds up are clipped to label k, which
    preserves the monotone bin convention.
    """
    if k < 2:
        raise InvariantViolation("cluster count k must be >= 2")
    genes = np.asarray(genes, dtype=np.float64)
    validate_genes(genes)
    labels = np.floor(genes * k).astype(np.int64) + 1
    np.minimum(labels, k, out=labels)
    return labels


def decode_block(genes: np.ndarray, k: int) -> np.ndarray:
    """Decode a (rows, n) gene matrix in one shot; no validation (hot path)."""
    labels = np.floor(genes * k).astype(np.int64) + 1
    np.minimum(labels, k, out=labels)
    return labels


def clamp_genes(genes: np.ndarray) -> np.ndarray:
    """Clip genes into [0, GENE_MAX] in place and return them."""
    np.clip(genes, 0.0, GENE_MAX, out=genes)
    return genes
