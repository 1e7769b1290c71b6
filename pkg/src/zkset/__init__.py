"""Zero-knowledge set-membership proofs.

Schnorr-style Sigma protocols over elliptic-curve and RSA groups, their
n-ary OR composition, constant-size proofs over an aggregated set
commitment, a binary Merkle baseline, and a benchmark harness.
"""

__version__ = "0.1.0"

from .errors import (
    AnalysisIncompleteError,
    DecodeError,
    DuplicateElementError,
    ElementMembershipError,
    EmptySetError,
    ExtractionError,
    MalformedProofError,
    MissingSetupSecretError,
    NonInvertibleChallengeError,
    ParameterError,
    ParamsMismatchError,
    UnsupportedBackendError,
    ZKSetError,
)
from .group import (
    GroupParams,
    SetupSecret,
    make_ec_group,
    make_group,
    make_rsa_group,
    make_toy_group,
)
from .setmember import (
    MembershipProof,
    ProverKey,
    SetCommitment,
    batch_verify,
    prove_aggregate,
    prove_or,
    setup,
    verify,
)
