use crate::error::{Error, Result};
use crate::fields::{PeriodicField, TorusGrid};

/// Conservative cell-average restriction onto a coarser grid with the same
/// period. Constants restrict to themselves and cell averages preserve the
/// discrete integral exactly.
pub fn restrict_to(field: &PeriodicField, coarse: TorusGrid) -> Result<PeriodicField> {
    let fine = field.grid();
    if coarse.dim() != fine.dim() || (coarse.length() - fine.length()).abs() > 1e-14 {
        return Err(Error::domain("restriction needs matching dimension and period"));
    }
    if fine.n_per_axis() % coarse.n_per_axis() != 0 {
        return Err(Error::domain("restriction needs an integer refinement factor"));
    }
    let f = fine.n_per_axis() / coarse.n_per_axis();
    if f == 1 {
        let mut out = field.clone();
        out.nonnegative = field.nonnegative;
        return Ok(out);
    }
    let dim = fine.dim();
    let cells_per = f.pow(dim as u32);
    let mut planes = Vec::with_capacity(field.components());
    for c in 0..field.components() {
        let src = field.component(c);
        let mut plane = vec![0.0; coarse.points()];
        for (ci, v) in plane.iter_mut().enumerate() {
            let cix = coarse.unflatten(ci);
            let mut acc = 0.0;
            for sub in 0..cells_per {
                let mut s = sub;
                let mut fix = [0usize; 3];
                for a in (0..dim).rev() {
                    fix[a] = cix[a] * f + s % f;
                    s /= f;
                }
                acc += src[fine.flatten(&fix[..dim])];
            }
            *v = acc / cells_per as f64;
        }
        planes.push(plane);
    }
    let mut out = PeriodicField::from_component_planes(coarse, planes)?;
    out.nonnegative = field.nonnegative;
    Ok(out)
}

/// L1 distance of two scalar fields after restriction to the coarser grid.
pub fn l1_diff_on_coarsest(a: &PeriodicField, b: &PeriodicField) -> Result<f64> {
    let (ra, rb) = to_common(a, b)?;
    Ok(ra.add_scaled(&rb, -1.0)?.l1_norm())
}

/// L2 distance of two fields after restriction to the coarser grid.
pub fn l2_diff_on_coarsest(a: &PeriodicField, b: &PeriodicField) -> Result<f64> {
    let (ra, rb) = to_common(a, b)?;
    Ok(ra.add_scaled(&rb, -1.0)?.l2_norm())
}

fn to_common(a: &PeriodicField, b: &PeriodicField) -> Result<(PeriodicField, PeriodicField)> {
    let coarse = if a.grid().n_per_axis() <= b.grid().n_per_axis() {
        a.grid()
    } else {
        b.grid()
    };
    Ok((restrict_to(a, coarse)?, restrict_to(b, coarse)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constants_restrict_to_themselves() {
        let fine = TorusGrid::standard(2, 64).unwrap();
        let coarse = TorusGrid::standard(2, 16).unwrap();
        let c = PeriodicField::constant(fine, 2.5);
        let r = restrict_to(&c, coarse).unwrap();
        for v in r.component(0) {
            assert_abs_diff_eq!(*v, 2.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn restriction_preserves_mass() {
        let fine = TorusGrid::standard(1, 128).unwrap();
        let coarse = TorusGrid::standard(1, 32).unwrap();
        let f = PeriodicField::scalar_from_fn(fine, |x| 1.0 + 0.5 * x[0].sin() + 0.2 * (3.0 * x[0]).cos());
        let r = restrict_to(&f, coarse).unwrap();
        assert_abs_diff_eq!(r.integral(), f.integral(), epsilon = 1e-12);
    }

    #[test]
    fn identical_fields_have_zero_distance() {
        let g = TorusGrid::standard(1, 64).unwrap();
        let f = PeriodicField::scalar_from_fn(g, |x| x[0].cos());
        assert_eq!(l1_diff_on_coarsest(&f, &f).unwrap(), 0.0);
    }
}
