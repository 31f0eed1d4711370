//! A real system of even order rewritten in complex-valued form and back.

use bimatrix::{from_real_system, io, RMatrix, TimeDomain};

fn main() -> bimatrix::Result<()> {
    let a = RMatrix::from_row_slice(4, 4, &[0.0, 1.0, 0.0, 0.0, -2.0, -0.3, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, -1.0, -0.2]);
    let b = RMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let cm = RMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let d = RMatrix::zeros(2, 2);

    let sys = from_real_system(a.clone(), b, cm, d, TimeDomain::Continuous)?;
    println!("A = {:.3}", sys.a());
    println!("B = {:.3}", sys.b());

    let back = sys.to_real_representation();
    println!("round trip error: {:.1e}", (back.a - a).norm());
    println!("{}", io::system_to_string(&sys)?);
    Ok(())
}
