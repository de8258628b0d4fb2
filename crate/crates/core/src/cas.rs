//! Macaulay2 script export for independent cross-checks.

use std::fmt::Write;

use crate::monad::Monad;
use crate::polyalgebra::{FieldSpec, PolyMatrix};

fn matrix_literal(m: &PolyMatrix) -> String {
    let rows: Vec<String> = m
        .to_string_rows()
        .into_iter()
        .map(|r| format!("{{{}}}", r.join(", ")))
        .collect();
    format!("matrix(R, {{{}}})", rows.join(", "))
}

/// Declares the multigraded ring and both maps, then asserts `g*f == 0`,
/// generic maximal rank, and that the maximal minors generate an ideal whose
/// saturation by the irrelevant ideal is the unit ideal.
pub fn export_macaulay2(m: &Monad) -> String {
    let space = m.space();
    let nf = space.num_factors();
    let mut s = String::new();
    let dims: Vec<String> = space.factor_dims().iter().map(|d| format!("P^{d}")).collect();
    writeln!(s, "-- monad {} -> {} -> {} on {}", m.a(), m.b(), m.c(), dims.join(" x ")).unwrap();
    let coeffs = match m.field() {
        FieldSpec::Rational => "QQ".to_string(),
        FieldSpec::Prime(p) => format!("ZZ/{p}"),
    };
    let vars: Vec<String> = (0..nf)
        .map(|j| format!("x{}_0..x{}_{}", j + 1, j + 1, space.factor_dims()[j]))
        .collect();
    let mut degrees = Vec::new();
    for j in 0..nf {
        let unit: Vec<String> = (0..nf).map(|i| if i == j { "1" } else { "0" }.to_string()).collect();
        for _ in 0..space.coords(j) {
            degrees.push(format!("{{{}}}", unit.join(",")));
        }
    }
    writeln!(s, "R = {coeffs}[{}, Degrees => {{{}}}];", vars.join(", "), degrees.join(", ")).unwrap();
    let irr: Vec<String> = (0..nf)
        .map(|j| format!("ideal(x{}_0..x{}_{})", j + 1, j + 1, space.factor_dims()[j]))
        .collect();
    writeln!(s, "irr = intersect({});", irr.join(", ")).unwrap();
    for (name, mat) in [("f", m.f()), ("g", m.g())] {
        if mat.rows() == 0 || mat.cols() == 0 {
            writeln!(s, "{name} = map(R^{}, R^{}, 0);", mat.rows(), mat.cols()).unwrap();
            continue;
        }
        writeln!(s, "{name} = {};", matrix_literal(mat)).unwrap();
    }
    writeln!(s, "assert(g*f == 0);").unwrap();
    for (name, mat) in [("f", m.f()), ("g", m.g())] {
        let r = mat.rows().min(mat.cols());
        if r == 0 {
            continue;
        }
        writeln!(s, "assert(rank {name} == {r});").unwrap();
        writeln!(s, "assert(saturate(minors({r}, {name}), irr) == ideal(1_R));").unwrap();
    }
    writeln!(s, "print \"all checks passed\";").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_homogenized_monad, build_monad, PairedSpaceParams};

    #[test]
    fn smallest_script() {
        let m = build_homogenized_monad(&PairedSpaceParams::new(vec![1], 1, None).unwrap()).unwrap();
        let s = export_macaulay2(&m);
        assert!(s.contains("R = QQ[x1_0..x1_1, x2_0..x2_1, Degrees => {{1,0}, {1,0}, {0,1}, {0,1}}];"));
        assert!(s.contains("f = matrix(R, {{x2_1}, {x2_0}, {-x1_1}, {-x1_0}});"));
        assert!(s.contains("g = matrix(R, {{x1_0, x1_1, x2_0, x2_1}});"));
        assert!(s.contains("assert(g*f == 0);"));
        assert_eq!(s, export_macaulay2(&m));
    }

    #[test]
    fn literal_two_pair_shapes() {
        let m = build_monad(&PairedSpaceParams::new(vec![1, 1], 2, None).unwrap()).unwrap();
        assert_eq!((m.f().rows(), m.f().cols()), (12, 2));
        let s = export_macaulay2(&m);
        assert!(s.contains("assert(rank f == 2);"));
        assert!(s.contains("assert(rank g == 2);"));
    }
}
