use affevo::affine::AffineJetTable;
use affevo::curve::{sample_curve, CurveSpec, HarmonicTerm};
use affevo::evolutoid::{cusp_third_derivative_check, singular_points};
use affevo::Tolerances;

fn main() {
    let phase: f64 = 1.9;
    let spec = CurveSpec::TrigPolynomial {
        x: vec![HarmonicTerm::new(2, 1.0, 0.0), HarmonicTerm::new(1, -phase.cos(), phase.sin())],
        y: vec![HarmonicTerm::new(2, 0.0, 1.0), HarmonicTerm::new(1, 0.0, 1.0)],
    };
    let curve = sample_curve(&spec, 1024).unwrap();
    let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
    for r in singular_points(&jets, 1.0).unwrap() {
        print!("s0={:.6}: ", r.s0);
        for ds in [1e-3, 5e-4, 2e-4, 1e-4] {
            let (num, ana) = cusp_third_derivative_check(&jets, r.s0, 1.0, ds).unwrap();
            print!("ds={ds:.0e}: rel={:+.2e}  ", (num - ana) / ana.abs().max(1e-30));
        }
        println!();
    }
}
