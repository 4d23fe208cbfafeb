//! Second homology of a shadow and its gleam-weighted intersection form.
//!
//! A 2-cycle assigns an integer to every region (indexed like
//! `Shadow::regions`) so that the signed sum vanishes along every internal
//! edge and the cycle avoids the boundary.

use num_rational::Rational64;

use super::Shadow;
use crate::error::{Error, Result};
use crate::linalg;

fn incidence(s: &Shadow) -> Result<Vec<Vec<i64>>> {
    if let Some(r) = s.regions.iter().find(|r| r.orientable == Some(false)) {
        return Err(Error::MissingData(format!(
            "region {:?} is non-orientable; H₂ needs orientable regions",
            r.id
        )));
    }
    let index = s.region_index();
    let n = s.regions.len();
    let mut rows = Vec::new();
    for e in &s.edges {
        let signs = e
            .signs
            .ok_or_else(|| Error::MissingData(format!("edge {:?} has no incidence signs", e.id)))?;
        let mut row = vec![0i64; n];
        for (id, sg) in e.regions.iter().zip(signs) {
            let i = *index
                .get(id.as_str())
                .ok_or_else(|| Error::InvalidShadow(vec![format!("edge {:?} references missing region {id:?}", e.id)]))?;
            row[i] += sg;
        }
        rows.push(row);
    }
    // cycles must vanish on regions that reach the boundary
    for e in &s.boundary_edges {
        let mut row = vec![0i64; n];
        if let Some(&i) = index.get(e.region.as_str()) {
            row[i] = 1;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A basis of the free part of `H₂(X; ℤ)`.
pub fn homology_h2(s: &Shadow) -> Result<Vec<Vec<i64>>> {
    let m = incidence(s)?;
    Ok(linalg::integer_kernel(&m, s.regions.len()))
}

/// `Q(h₁, h₂) = Σ_R ⟨h₁|R⟩⟨h₂|R⟩ gl(R)`, a half-integer.
pub fn bilinear_form(s: &Shadow, h1: &[i64], h2: &[i64]) -> Result<Rational64> {
    let n = s.regions.len();
    if h1.len() != n || h2.len() != n {
        return Err(Error::MissingData(format!("cycles must have {n} region coefficients")));
    }
    let twice: i64 = s.regions.iter().zip(h1).zip(h2).map(|((r, a), b)| a * b * r.gleam2).sum();
    Ok(Rational64::new(twice, 2))
}

/// Signature of the intersection form on `H₂`.
pub fn signature(s: &Shadow) -> Result<i64> {
    let basis = homology_h2(s)?;
    // 2Q is integral and has the same signature
    let gram: Vec<Vec<i64>> = basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| s.regions.iter().zip(x).zip(y).map(|((r, a), b)| a * b * r.gleam2).sum())
                .collect()
        })
        .collect();
    Ok(linalg::signature(&gram))
}

#[cfg(test)]
mod tests {
    use super::super::{InternalEdge, Region};
    use super::*;
    use proptest::prelude::*;

    fn region(id: &str, gleam2: i64) -> Region {
        Region {
            id: id.into(),
            gleam2,
            chi: 1,
            external: false,
            color: None,
            orientable: Some(true),
        }
    }

    #[test]
    fn sphere() {
        for n in -4..=4i64 {
            let s = Shadow::sphere(n);
            let h = homology_h2(&s).unwrap();
            assert_eq!(h.len(), 1);
            assert_eq!(h[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
            for k in -2..=2 {
                for j in -2..=2 {
                    assert_eq!(bilinear_form(&s, &[k], &[j]).unwrap(), Rational64::from(k * j * n));
                }
                assert_eq!(bilinear_form(&s, &[k], &[0]).unwrap(), Rational64::from(0));
            }
            assert_eq!(signature(&s).unwrap(), n.signum());
        }
    }

    #[test]
    fn no_regions() {
        let s = Shadow::default();
        assert!(homology_h2(&s).unwrap().is_empty());
        assert_eq!(signature(&s).unwrap(), 0);
    }

    #[test]
    fn two_disks_on_a_circle() {
        // two disks glued along their common boundary circle: a sphere
        let mut s = Shadow::default();
        s.regions.push(region("D1", 2));
        s.regions.push(region("D2", 4));
        s.edges.push(InternalEdge {
            id: "e".into(),
            chi: 0,
            regions: ["D1".into(), "D2".into(), "D2".into()],
            signs: Some([1, -1, 0]),
            nonorientable: None,
        });
        let h = homology_h2(&s).unwrap();
        assert_eq!(h.len(), 2 - linalg::rational_rank(&incidence(&s).unwrap()));
        assert_eq!(h.len(), 1);
        assert_eq!(h[0][0], h[0][1]);
        // gleams add: 1 + 2
        assert_eq!(signature(&s).unwrap(), 1);
        assert_eq!(bilinear_form(&s, &h[0], &h[0]).unwrap(), Rational64::from(3));
    }

    #[test]
    fn missing_data_is_an_error() {
        let mut s = Shadow::sphere(1);
        s.regions[0].orientable = Some(false);
        assert!(matches!(homology_h2(&s), Err(Error::MissingData(_))));
        let mut s = Shadow::sphere(1);
        s.edges.push(InternalEdge {
            id: "e".into(),
            chi: 0,
            regions: ["R".into(), "R".into(), "R".into()],
            signs: None,
            nonorientable: None,
        });
        assert!(matches!(signature(&s), Err(Error::MissingData(_))));
    }

    proptest! {
        #[test]
        fn signature_independent_of_basis(
            gleams in proptest::collection::vec(-6i64..=6, 1..=4),
            signs in proptest::collection::vec(proptest::collection::vec(-1i64..=1, 3), 0..3),
            slots in proptest::collection::vec(proptest::collection::vec(0usize..4, 3), 3),
            shear in proptest::collection::vec(-2i64..=2, 6),
        ) {
            let mut s = Shadow::default();
            for (i, g) in gleams.iter().enumerate() {
                s.regions.push(region(&format!("R{i}"), *g));
            }
            let n = gleams.len();
            for (k, sg) in signs.iter().enumerate() {
                let ids = [0, 1, 2].map(|j| format!("R{}", slots[k][j] % n));
                s.edges.push(InternalEdge {
                    id: format!("e{k}"),
                    chi: 0,
                    regions: ids,
                    signs: Some([sg[0], sg[1], sg[2]]),
                    nonorientable: None,
                });
            }
            let basis = homology_h2(&s).unwrap();
            let m = incidence(&s).unwrap();
            prop_assert_eq!(basis.len(), n - linalg::rational_rank(&m));
            let sig = signature(&s).unwrap();
            // new basis: b'_i = b_i + Σ_{j<i} t_ij b_j, unimodular
            let mut t = shear.iter();
            let mut changed = basis.clone();
            for i in 0..basis.len() {
                for j in 0..i {
                    let c = *t.next().unwrap_or(&0);
                    for x in 0..n {
                        changed[i][x] += c * basis[j][x];
                    }
                }
            }
            let gram: Vec<Vec<i64>> = changed
                .iter()
                .map(|x| changed.iter().map(|y| (0..n).map(|i| x[i] * y[i] * gleams[i]).sum()).collect())
                .collect();
            prop_assert_eq!(linalg::signature(&gram), sig);
        }
    }
}
