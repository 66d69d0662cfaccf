"""Complexes, double complexes, spectral sequences, Čech systems and cup products."""
from .complexes import (SES, ChainMap, Cohomology, Complex, ConventionError, cone,
                        cone_sequence_dims, identity_map)
from .double import DoubleComplex, TotalComplex
from .specseq import SpectralSequence, Subquotient
from .cups import (CupFamily, LeibnizReport, PageProducts, TotalCup, dbl_cup_leibniz_check,
                   filtration_preserved, tensor_total)
from .cech import DGA, CechSystem, CechTriple, FaceError, cech_cup, cech_double
from .marco import HypothesisFailure, MarcoVerdict, four_term_ker_coker, triangle_ker_coker


def total_complex(D):
    return D.total()


def spectral_sequence(D, up_to_page=3):
    S = SpectralSequence(D)
    return S, S.pages(up_to_page)


def connecting_map(ses, q):
    return ses.connecting_map(q)


def tot_tensor_cup(cup):
    return TotalCup(cup)


def page_products(cup):
    return PageProducts(TotalCup(cup))
