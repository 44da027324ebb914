use crate::community::CommunityAssignment;
use crate::error::{Error, Result};
use crate::pubo::{MaskPoly, PuboPolynomial};

/// The restriction of a QUBO to one community.
///
/// Local variables `0..boundary_vars.len()` are the boundary spins in
/// ascending global order, followed by the core spins.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunitySubinstance {
    pub community: usize,
    pub boundary_vars: Vec<usize>,
    pub core_vars: Vec<usize>,
    pub intra_poly: PuboPolynomial,
}

impl CommunitySubinstance {
    pub fn num_boundary(&self) -> usize {
        self.boundary_vars.len()
    }

    pub fn num_core(&self) -> usize {
        self.core_vars.len()
    }

    pub fn num_local(&self) -> usize {
        self.boundary_vars.len() + self.core_vars.len()
    }

    pub(crate) fn local_mask_poly(&self) -> Result<MaskPoly> {
        self.intra_poly.to_mask_poly()
    }

    /// Local boundary mask of a full assignment given as global spins.
    pub fn boundary_mask(&self, spins: &[i8]) -> u64 {
        self.boundary_vars
            .iter()
            .enumerate()
            .filter(|(_, &v)| spins[v] == -1)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Writes a packed core assignment into global spins.
    pub fn write_core(&self, core_mask: u64, spins: &mut [i8]) {
        for (j, &v) in self.core_vars.iter().enumerate() {
            spins[v] = crate::pubo::spin_of_bit(core_mask, j);
        }
    }
}

/// Intra-community parts plus the across-community remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySplit {
    pub num_vars: usize,
    pub subinstances: Vec<CommunitySubinstance>,
    /// Constant plus every quadratic term joining two communities, over the
    /// original (global) variable indices.
    pub across: PuboPolynomial,
    /// Global boundary `B`, ascending; position is the reduced index.
    pub boundary: Vec<usize>,
}

/// Split a QUBO along `ca`.
///
/// Quadratic terms go to a community when both spins belong to it and to the
/// across part otherwise; linear terms are intra, the constant is across.
pub fn split_energy(poly: &PuboPolynomial, ca: &CommunityAssignment) -> Result<EnergySplit> {
    let n = poly.num_vars();
    if ca.num_vertices() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: ca.num_vertices(),
        });
    }
    let degree = poly.degree();
    if degree > 2 {
        return Err(Error::UnsupportedDegree { degree, max: 2 });
    }

    let k = ca.num_communities();
    let mut local = vec![0usize; n];
    let mut subinstances: Vec<CommunitySubinstance> = (0..k)
        .map(|c| {
            let boundary_vars = ca.boundary_of(c);
            let core_vars = ca.core_of(c);
            for (i, &v) in boundary_vars.iter().chain(&core_vars).enumerate() {
                local[v] = i;
            }
            let size = boundary_vars.len() + core_vars.len();
            CommunitySubinstance {
                community: c,
                boundary_vars,
                core_vars,
                intra_poly: PuboPolynomial::new(size),
            }
        })
        .collect();

    let mut across = PuboPolynomial::new(n);
    for (vars, coeff) in poly.terms() {
        match *vars {
            [] => across.add_term_sorted(Vec::new(), coeff),
            [v] => {
                let sub = &mut subinstances[ca.community_of(v)];
                sub.intra_poly.add_term(&[local[v]], coeff)?;
            }
            [u, v] if ca.community_of(u) == ca.community_of(v) => {
                let sub = &mut subinstances[ca.community_of(u)];
                sub.intra_poly.add_term(&[local[u], local[v]], coeff)?;
            }
            [u, v] => {
                if !ca.is_boundary(u) || !ca.is_boundary(v) {
                    return Err(Error::Instance(format!(
                        "term ({u}, {v}) crosses communities but its spins are not both \
                         boundary; the community assignment was not built from this \
                         polynomial's interaction graph"
                    )));
                }
                across.add_term_sorted(vec![u, v], coeff);
            }
            _ => unreachable!("degree checked above"),
        }
    }

    Ok(EnergySplit {
        num_vars: n,
        subinstances,
        across,
        boundary: ca.global_boundary(),
    })
}
