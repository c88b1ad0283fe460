"""Symbolic Lagrangian and Hamiltonian mechanics with Noether charges."""

from ._noether import (
    BlowUpError,
    ConservedQuantity,
    Error,
    EvalError,
    Expr,
    Hamiltonian,
    Lagrangian,
    MathError,
    ParseError,
    SymmetryReport,
    Trajectory,
    VectorField,
    associated_hamiltonian,
    drift_report,
    euler_lagrange,
    find_symmetries,
    first_variation,
    hamilton_equations,
    integrate,
    legendre_map,
    lie_derivative,
    parse,
    parse_scenario,
    poisson_bracket,
    run_cli,
    solve_accelerations,
    symmetry_classify,
    symmetry_classify_hamiltonian,
    to_csv,
    verify_association,
    verify_first_integral,
    verify_pullback_relation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
