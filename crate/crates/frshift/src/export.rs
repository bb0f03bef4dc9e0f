//! CSV and binary artifact writers. Every CSV has a header row,
//! 17-significant-digit floats, and LF line endings.

use crate::error::Result;
use crate::fredholm::SymbolSurface;
use crate::mellin::SampledFunction;
use crate::oplab::{DecayProfile, FiniteSection};
use std::io::Write;
use std::path::Path;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `fiber_id, x, re_n, im_n, abs_n` rows over the full product.
pub fn write_symbol_surface(surface: &SymbolSurface, path: &Path) -> Result<()> {
    let mut out = String::from("fiber_id,x,re_n,im_n,abs_n\n");
    for (fid, row) in surface.samples.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fid,
                num(surface.x_grid[k]),
                num(v.re),
                num(v.im),
                num(v.norm())
            ));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// `m, sigma_min` rows of the finite-section decay profile.
pub fn write_decay(profile: &DecayProfile, path: &Path) -> Result<()> {
    let mut out = String::from("m,sigma_min\n");
    for &(m, sigma) in &profile.entries {
        out.push_str(&format!("{},{}\n", m, num(sigma)));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// `x, t, re_u, im_u` rows of a sampled function on its log grid.
pub fn write_solution(u: &SampledFunction, path: &Path) -> Result<()> {
    let mut out = String::from("x,t,re_u,im_u\n");
    for (j, v) in u.values.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            num(u.grid.x(j)),
            num(u.grid.t(j)),
            num(v.re),
            num(v.im)
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Binary finite-section dump: magic `FSEC`, u32 n (LE), then the n*n
/// complex entries row-major as little-endian f64 (re, im) pairs.
pub fn write_fsec(section: &FiniteSection, path: &Path) -> Result<()> {
    let n = section.grid.n;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(b"FSEC")?;
    out.write_all(&(n as u32).to_le_bytes())?;
    for i in 0..n {
        for j in 0..n {
            let v = section.matrix[(i, j)];
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::{gaussian_bump, LogGrid};
    use crate::oplab::{finite_section, smallest_singular, OperatorExpr};

    #[test]
    fn csv_format_contract() {
        let dir = tempfile::tempdir().unwrap();
        let g = LogGrid::new(4.0, 16).unwrap();
        let f = gaussian_bump(g, 0.0, 1.0);
        let path = dir.path().join("solution.csv");
        write_solution(&f, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x,t,re_u,im_u\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 17);
        // 17 significant digits: mantissa with 16 decimals
        let first = text.lines().nth(1).unwrap();
        assert!(first.split(',').all(|f| f.contains('e')), "{first}");
    }

    #[test]
    fn fsec_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = LogGrid::new(4.0, 16).unwrap();
        let fs = finite_section(&OperatorExpr::Identity, g, 2.0, 1024).unwrap();
        let path = dir.path().join("n.fsec");
        write_fsec(&fs, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"FSEC");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 16);
        assert_eq!(bytes.len(), 8 + 16 * 16 * 16);
        let re0 = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
        assert_eq!(re0, 1.0);
    }

    #[test]
    fn decay_csv() {
        let dir = tempfile::tempdir().unwrap();
        let g = LogGrid::new(4.0, 64).unwrap();
        let fs = finite_section(&OperatorExpr::Identity, g, 2.0, 1024).unwrap();
        let profile = smallest_singular(&fs, &[16, 32, 64]).unwrap();
        let path = dir.path().join("decay.csv");
        write_decay(&profile, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("m,sigma_min\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
