//! Fixtures shared by the benchmarks in `benches/`.

use dissect::diagram::enumerate;
use dissect::{DecoratedDiagram, DissectionDiagram, Rational, Scalar};

/// All diagrams of degree `n` with symbolic decorations.
pub fn symbolic(n: usize) -> Vec<DecoratedDiagram> {
    enumerate(n).expect("degree within bound").into_iter().map(DecoratedDiagram::symbolic).collect()
}

/// A degree-2 corolla with Gaussian decorations away from the real axis.
pub fn numeric_corolla() -> DecoratedDiagram {
    let g = |re: i64, im: i64| Scalar::gaussian(Rational::new(re.into(), 4.into()), Rational::new(im.into(), 4.into()));
    DecoratedDiagram::new(DissectionDiagram::corolla(2), vec![g(2, 4), g(6, -2)], vec![g(0, 0), g(0, 0), g(8, 0)])
        .expect("valid decorations")
}
