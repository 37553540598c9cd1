"""Verdicts: degree identities, generation, Weil dimensions, exterior powers."""
from .checks import (CaseDescriptor, CertReport, CheckResult,
                     canonical_degree_check, degree_product_check,
                     exterior_invariants_check, generation_check)
from .tables import load_tables, table_rows, verify_tables
from .weil import WeilResult, imprimitive_weil_crosscheck, weil_dims
from .verify import CASES, full_verify, normalize_job
