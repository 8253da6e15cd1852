//! Binary vorticity checkpoints.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `RDF1` |
//! | 4     | `u32` version (1) |
//! | 4     | `u32` truncation `K` |
//! | 8     | `f64` Reynolds number, `≤ 0` meaning infinite |
//! | 8     | `f64` time |
//! | 16 × (2K+1)² | complex128 coefficients (re, im), `k₁` outer, `k₂` inner |

use num_complex::Complex64;
use std::io::{Read, Write};

use super::{Reynolds, SimulationState};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"RDF1";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(
    mut w: W,
    state: &SimulationState,
    reynolds: Reynolds,
) -> Result<()> {
    state.omega.require_scalar()?;
    let k = u32::try_from(state.omega.k_max())
        .map_err(|_| Error::Format("truncation does not fit in u32".into()))?;
    let mut buf = Vec::with_capacity(28 + 16 * state.omega.component(0).len());
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&k.to_le_bytes());
    buf.extend_from_slice(&reynolds.to_f64().to_le_bytes());
    buf.extend_from_slice(&state.t.to_le_bytes());
    for z in state.omega.component(0) {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn take<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated checkpoint".into()),
        _ => Error::Io(e),
    })?;
    Ok(b)
}

/// Reads a checkpoint; the step counter of the returned state is zero.
pub fn read_checkpoint<R: Read>(mut r: R) -> Result<(SimulationState, Reynolds)> {
    let magic: [u8; 4] = take(&mut r)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = u32::from_le_bytes(take(&mut r)?);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let k_max = u32::from_le_bytes(take(&mut r)?) as usize;
    let re = f64::from_le_bytes(take(&mut r)?);
    let t = f64::from_le_bytes(take(&mut r)?);
    let side = 2 * k_max + 1;
    let mut coeffs = Vec::with_capacity(side * side);
    for _ in 0..side * side {
        let re = f64::from_le_bytes(take(&mut r)?);
        let im = f64::from_le_bytes(take(&mut r)?);
        coeffs.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after coefficients".into()));
    }
    let omega = SpectralField::from_components(k_max, vec![coeffs])?;
    Ok((
        SimulationState {
            t,
            omega,
            step_count: 0,
        },
        Reynolds::from_f64(re),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipes::random_smooth_vorticity;

    #[test]
    fn round_trip_is_bit_exact() {
        let state = SimulationState {
            t: 0.123456789,
            omega: random_smooth_vorticity(6, 3, 3.0, 1.0),
            step_count: 0,
        };
        for re in [Reynolds::Finite(1234.5), Reynolds::Infinite] {
            let mut bytes = vec![];
            write_checkpoint(&mut bytes, &state, re).unwrap();
            assert_eq!(bytes.len(), 28 + 16 * 13 * 13);
            assert_eq!(&bytes[..4], b"RDF1");
            let (back, re_back) = read_checkpoint(bytes.as_slice()).unwrap();
            assert_eq!(back, state);
            assert_eq!(re_back, re);
            let mut again = vec![];
            write_checkpoint(&mut again, &back, re_back).unwrap();
            assert_eq!(again, bytes);
        }
    }

    #[test]
    fn header_fields_are_little_endian() {
        let state = SimulationState::new(SpectralField::zeros_scalar(2));
        let mut bytes = vec![];
        write_checkpoint(&mut bytes, &state, Reynolds::Finite(100.0)).unwrap();
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &[2, 0, 0, 0]);
        assert_eq!(f64::from_le_bytes(bytes[12..20].try_into().unwrap()), 100.0);
    }

    #[test]
    fn corrupt_input_rejected() {
        let state = SimulationState::new(SpectralField::zeros_scalar(2));
        let mut bytes = vec![];
        write_checkpoint(&mut bytes, &state, Reynolds::Infinite).unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(read_checkpoint(bad.as_slice()), Err(Error::Format(_))));
        assert!(matches!(
            read_checkpoint(&bytes[..bytes.len() - 3]),
            Err(Error::Format(_))
        ));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(read_checkpoint(long.as_slice()), Err(Error::Format(_))));
        let mut v2 = bytes;
        v2[4] = 2;
        assert!(matches!(read_checkpoint(v2.as_slice()), Err(Error::Format(_))));
    }
}
