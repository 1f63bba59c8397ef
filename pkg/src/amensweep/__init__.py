"""amensweep: diffusion of alternating cycles on multicomplexes with
machine-checkable l1-invisibility certificates."""

from .multicomplex import (AlgebraicSimplex, Multicomplex, Simplex,
                           Submulticomplex, ValidationReport,
                           simplicial_from_top)
from .chains import Chain
from .action import (GroupAction, GroupElement, HomotopyWitness,
                     IdentityElement, TableAutomorphism, apply,
                     bounding_chain, compose_witness, orbits,
                     stabilizer_sign_search, verify_witness)
from .diffusion import (Measure, PowerMeasure, ProductMeasure, convolve,
                        diffuse, synthesize_measure)
from .certifier import (Certificate, HalvingStep, certify,
                        check_odd_stabilizers, halve,
                        seminorm_bound_from_certificate, verify_certificate)
from .homology_lp import (HomologyBasis, SeminormResult, class_of, homology,
                          seminorm_lp)
from .cover import (Cover, CoverMember, Coloring, barycentric_subdivide,
                    find_coloring, multiplicity, repeated_color_witness)
from .models import (CircleComplex, CircleElement, CircleModel,
                     SyntheticInstance, gen_circle_model, gen_synthetic,
                     prism_witness)
from .errors import (AmensweepError, CertificateError, DomainError,
                     FormatError, SynthesisFailure, WindowExhausted)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicSimplex", "Multicomplex", "Simplex", "Submulticomplex",
    "ValidationReport", "simplicial_from_top", "Chain",
    "GroupAction", "GroupElement", "HomotopyWitness", "IdentityElement",
    "TableAutomorphism", "apply", "bounding_chain", "compose_witness",
    "orbits", "stabilizer_sign_search", "verify_witness",
    "Measure", "PowerMeasure", "ProductMeasure", "convolve", "diffuse",
    "synthesize_measure",
    "Certificate", "HalvingStep", "certify", "check_odd_stabilizers",
    "halve", "seminorm_bound_from_certificate", "verify_certificate",
    "HomologyBasis", "SeminormResult", "class_of", "homology",
    "seminorm_lp",
    "Cover", "CoverMember", "Coloring", "barycentric_subdivide",
    "find_coloring", "multiplicity", "repeated_color_witness",
    "CircleComplex", "CircleElement", "CircleModel", "SyntheticInstance",
    "gen_circle_model", "gen_synthetic", "prism_witness",
    "AmensweepError", "CertificateError", "DomainError", "FormatError",
    "SynthesisFailure", "WindowExhausted",
    "__version__",
]
