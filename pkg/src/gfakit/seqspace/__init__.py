"""Sequence spaces, ultranorms and the quotient algebra on representatives."""
from .certificate import CertificateMap, DilationCertificate, GrowthCertificate, add_certificates
from .monomial import MonoSum, mono_from_expr
from .seq import (
    FUNCTION, SCALAR, CertificateCheck, FixedCertificate, IndexedCertificate, Seq, SeqError,
    check_certificate, piecewise, seq_add, seq_derivative, seq_mul, seq_scalar_mul, seq_sub,
    zero_seq,
)
from .ultranorm import (
    CLOSED_FORM, CSV_COLUMNS, CSV_HEADER, DIVERGENT, EQUAL, INCONCLUSIVE, INDUCTIVE, MODERATE,
    NEGLIGIBLE, NOT_EQUAL, PROJECTIVE, TAIL_FIT, Classification, UltranormEstimate, Witness,
    classify, closed_form_exponent, distance, equal_in_quotient, rows_to_csv, tail_fit, ultranorm,
)

__all__ = [
    "CLOSED_FORM", "CSV_COLUMNS", "CSV_HEADER", "CertificateCheck", "CertificateMap",
    "Classification", "DIVERGENT", "DilationCertificate", "EQUAL", "FUNCTION", "FixedCertificate",
    "GrowthCertificate", "INCONCLUSIVE", "INDUCTIVE", "IndexedCertificate", "MODERATE", "MonoSum",
    "NEGLIGIBLE", "NOT_EQUAL", "PROJECTIVE", "SCALAR", "mono_from_expr", "Seq", "SeqError", "TAIL_FIT",
    "UltranormEstimate", "Witness", "add_certificates", "check_certificate", "classify",
    "closed_form_exponent", "distance", "equal_in_quotient", "piecewise", "rows_to_csv",
    "seq_add", "seq_derivative", "seq_mul", "seq_scalar_mul", "seq_sub", "tail_fit", "ultranorm",
    "zero_seq",
]
