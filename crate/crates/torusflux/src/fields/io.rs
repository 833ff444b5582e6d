//! Field dump format: little-endian binary with header
//! magic "TFLX", version u32, dim u32, n per axis u32 x dim, components u32,
//! then float64 samples in row-major order (last axis fastest), one
//! component plane after another.

use super::field::PeriodicField;
use super::grid::TorusGrid;
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"TFLX";
const VERSION: u32 = 1;

pub fn write_field<W: Write>(w: &mut W, field: &PeriodicField) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    for _ in 0..grid.dim() {
        w.write_all(&(grid.n_per_axis() as u32).to_le_bytes())?;
    }
    w.write_all(&(field.components() as u32).to_le_bytes())?;
    w.write_all(&grid.length().to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<PeriodicField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::domain("not a TFLX field dump"));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(Error::domain(format!("unsupported TFLX version {version}")));
    }
    let dim = read_u32(r)? as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::domain("corrupt TFLX header: bad dimension"));
    }
    let mut n = 0usize;
    for a in 0..dim {
        let na = read_u32(r)? as usize;
        if a == 0 {
            n = na;
        } else if na != n {
            return Err(Error::domain("anisotropic grids not supported"));
        }
    }
    let components = read_u32(r)? as usize;
    let mut lbuf = [0u8; 8];
    r.read_exact(&mut lbuf)?;
    let length = f64::from_le_bytes(lbuf);
    let grid = TorusGrid::new(dim, n, length)?;
    if components != 1 && components != dim {
        return Err(Error::domain("corrupt TFLX header: bad component count"));
    }
    let mut planes = Vec::with_capacity(components);
    for _ in 0..components {
        let mut plane = vec![0.0f64; grid.points()];
        for v in &mut plane {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            *v = f64::from_le_bytes(b);
        }
        planes.push(plane);
    }
    PeriodicField::from_component_planes(grid, planes)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn save_field(path: &Path, field: &PeriodicField) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut f, field)
}

pub fn load_field(path: &Path) -> Result<PeriodicField> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut f)
}

/// CSV export of a 1D slice along `axis` through the given base point.
pub fn slice_csv(field: &PeriodicField, axis: usize, through: &[usize]) -> String {
    let grid = field.grid();
    let mut out = String::from("x");
    for c in 0..field.components() {
        out.push_str(&format!(",c{c}"));
    }
    out.push('\n');
    let mut ix = [0usize; 3];
    ix[..grid.dim()].copy_from_slice(&through[..grid.dim()]);
    for i in 0..grid.n_per_axis() {
        ix[axis] = i;
        let idx = grid.flatten(&ix[..grid.dim()]);
        out.push_str(&crate::harness::fmt_f64(grid.coord(i)));
        for c in 0..field.components() {
            out.push(',');
            out.push_str(&crate::harness::fmt_f64(field.component(c)[idx]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_bits() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let f = PeriodicField::vector_from_fn(g, |x, c| {
            (x[0] * (c + 1) as f64).sin() + 1e-17 * (c as f64)
        });
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        let g2 = read_field(&mut buf.as_slice()).unwrap();
        assert_eq!(f.values(), g2.values());
        assert_eq!(f.grid(), g2.grid());
        assert_eq!(f.components(), g2.components());
    }

    #[test]
    fn rejects_garbage() {
        let mut bad: &[u8] = b"NOPE0000000";
        assert!(read_field(&mut bad).is_err());
    }
}
