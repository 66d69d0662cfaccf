"""Geometric packages, syntomic polynomial complexes, traces, cups and Gysin maps."""
from .package import (Filtration, GeometricPackage, PackageError, PackageMorphism, tensor_packages,
                      twist_shift)
from .syn import (AbsComplex, F1Inverse, FFiltration, HKSequence, NotInvertible, SynComplex, abs_cone,
                  build_syn, compare_prq, f1_inverse, f_filtration, hk_exact_sequence)
from .trace import InadmissibleError, TraceContext, trace_map, trace_scalar
from .cup import PairingData, R3bisReport, SynCup, e2_pairing_matrices, pairing, r3bis_check, syn_cup
from .gysin import (AdjunctionVerdict, GysinBundle, GysinResult, gysin, gysin_adjunction_check,
                    gysin_trace_check, pullback, shift_identification, twist_poly)
from . import models
