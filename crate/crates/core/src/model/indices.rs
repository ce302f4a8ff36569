//! Index bijections between process tuples and row numbers.
//!
//! These functions speak the 1-based convention of the written index laws
//! (`u = sigma(B_S)(y_1 - 1) + y_2` and
//! `phi = sigma^2(B_S)(g - 1) + sigma(B_S)(y_1 - 1) + y_2`); everything
//! else in the crate is 0-based.

use crate::error::{Error, Result};

fn check_range(value: usize, upper: usize, what: &str) -> Result<()> {
    if value == 0 || value > upper {
        return Err(Error::IndexOutOfRange(format!(
            "{what} = {value} outside 1..={upper}"
        )));
    }
    Ok(())
}

/// Transportation process index `u` for origin `y1` and destination `y2`
/// among `n_bs` buffers. All arguments and the result are 1-based.
pub fn transport_index(y1: usize, y2: usize, n_bs: usize) -> Result<usize> {
    check_range(y1, n_bs, "origin buffer")?;
    check_range(y2, n_bs, "destination buffer")?;
    Ok(n_bs * (y1 - 1) + y2)
}

/// Inverse of [`transport_index`]: recovers `(y1, y2)` from `u`. 1-based.
pub fn transport_endpoints(u: usize, n_bs: usize) -> Result<(usize, usize)> {
    check_range(u, n_bs * n_bs, "transportation process")?;
    let y1 = (u - 1) / n_bs + 1;
    let y2 = (u - 1) % n_bs + 1;
    Ok((y1, y2))
}

/// Refined transportation process index `phi` for holding process `g`,
/// origin `y1`, and destination `y2`. 1-based; consistent with
/// `phi = sigma(P_eta)(g - 1) + u`.
pub fn refined_index(g: usize, y1: usize, y2: usize, n_gamma: usize, n_bs: usize) -> Result<usize> {
    check_range(g, n_gamma, "holding process")?;
    let u = transport_index(y1, y2, n_bs)?;
    Ok(n_bs * n_bs * (g - 1) + u)
}

/// Inverse of [`refined_index`]: recovers `(g, y1, y2)` from `phi`. 1-based.
pub fn refined_decompose(phi: usize, n_gamma: usize, n_bs: usize) -> Result<(usize, usize, usize)> {
    let n_eta = n_bs * n_bs;
    check_range(phi, n_gamma * n_eta, "refined transportation process")?;
    let g = (phi - 1) / n_eta + 1;
    let u = (phi - 1) % n_eta + 1;
    let (y1, y2) = transport_endpoints(u, n_bs)?;
    Ok((g, y1, y2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_index_examples() {
        assert_eq!(transport_index(1, 1, 2).unwrap(), 1);
        assert_eq!(transport_index(1, 2, 2).unwrap(), 2);
        assert_eq!(transport_index(2, 3, 3).unwrap(), 6);
    }

    #[test]
    fn transport_index_is_a_bijection() {
        for n_bs in 1..=5 {
            let mut seen = vec![false; n_bs * n_bs];
            for y1 in 1..=n_bs {
                for y2 in 1..=n_bs {
                    let u = transport_index(y1, y2, n_bs).unwrap();
                    assert!((1..=n_bs * n_bs).contains(&u));
                    assert!(!seen[u - 1]);
                    seen[u - 1] = true;
                    assert_eq!(transport_endpoints(u, n_bs).unwrap(), (y1, y2));
                }
            }
        }
    }

    #[test]
    fn transport_index_out_of_range() {
        assert!(transport_index(0, 1, 2).is_err());
        assert!(transport_index(1, 3, 2).is_err());
        assert!(transport_endpoints(5, 2).is_err());
    }

    #[test]
    fn refined_index_examples() {
        assert_eq!(refined_index(1, 1, 1, 2, 2).unwrap(), 1);
        // sigma^2(B_S) = 4: phi = 4*(2-1) + 2*(1-1) + 2 = 6.
        assert_eq!(refined_index(2, 1, 2, 2, 2).unwrap(), 6);
    }

    #[test]
    fn refined_index_consistent_with_g_u_decomposition() {
        let n_gamma = 3;
        let n_bs = 4;
        let n_eta = n_bs * n_bs;
        for g in 1..=n_gamma {
            for y1 in 1..=n_bs {
                for y2 in 1..=n_bs {
                    let phi = refined_index(g, y1, y2, n_gamma, n_bs).unwrap();
                    let u = transport_index(y1, y2, n_bs).unwrap();
                    assert_eq!(phi, n_eta * (g - 1) + u);
                    assert_eq!(refined_decompose(phi, n_gamma, n_bs).unwrap(), (g, y1, y2));
                }
            }
        }
    }
}
