"""NTT-based negacyclic polynomial multiplication over prime fields.

Modular reduction variants, merged/truncated/fused transforms, 2D and
radix-4 decompositions, RNS decomposition, and operation-count
instrumentation.  Hot kernels run in a compiled extension when available,
with a pure-Python fallback selected at import (see nttmul.backend).
"""

from . import backend
from .modarith import (
    Modulus,
    ModulusTooLargeError,
    ReductionStats,
    barrett_classical,
    barrett_dhem,
    barrett_proposed,
    bit_length,
    half_mod,
    mod_add,
    mod_sub,
    mulmod,
    reduce_builtin,
)
from .nttcore import (
    OpCounter,
    Polynomial,
    batch_ntt,
    intt_gs,
    intt_gs_scaled,
    intt_gs_truncated,
    intt_radix4,
    ntt_2d,
    ntt_2d_inv,
    ntt_2d_permutation,
    ntt_ct,
    ntt_ct_truncated,
    ntt_radix4,
    scale_by,
)
from .params import (
    NttPlan,
    ParameterError,
    bit_reverse,
    build_plan,
    find_primitive_root,
    generate_prime,
    is_prime,
    load_plan,
    save_plan,
    validate_plan,
)
from .polymul import (
    FusedPlan,
    fused_butterfly,
    hadamard,
    negacyclic_naive,
    polymul_batch,
    polymul_fused,
    polymul_ntt,
)
from .rns import (
    RnsBasis,
    decompose,
    load_basis,
    negacyclic_naive_bigint,
    polymul_rns,
    reconstruct,
    workload_size,
)

__version__ = "0.1.0"
