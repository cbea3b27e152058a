use super::poly::{inv_finitary, pol_omega};
use crate::domain::FiniteDomain;
use crate::error::Result;
use crate::finite::{inv, pol, relation_clone_generate, FinOp, FinRel};
use crate::omega_rel::DecSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionCaps {
    /// Cuts and invariants up to this arity.
    pub relation_arity: usize,
    /// Finitary polymorphisms up to this arity.
    pub op_arity: usize,
    /// ω-polymorphisms up to this width.
    pub width: usize,
}

/// One arity of the comparison
/// `<R_fin> ⊆ Inv^<ω(Pol^ω R_fin^⊤) ⊆ Inv(Pol R_fin)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityRow {
    pub arity: usize,
    /// Relation clone generated by the cuts.
    pub generated: usize,
    /// Finitary invariants of the ω-polymorphisms.
    pub omega_side: usize,
    /// Invariants of the finitary polymorphisms.
    pub finite_side: usize,
    pub generated_in_omega: bool,
    pub omega_in_finite: bool,
    /// First relation breaking an inclusion.
    pub witness: Option<FinRel>,
}

impl ArityRow {
    pub fn included(&self) -> bool {
        self.generated_in_omega && self.omega_in_finite
    }

    pub fn equal(&self) -> bool {
        self.included() && self.generated == self.finite_side
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub caps: InclusionCaps,
    /// Distinct cuts of the family up to the relation arity.
    pub cuts: usize,
    pub polymorphisms: usize,
    pub omega_polymorphisms: usize,
    pub rows: Vec<ArityRow>,
}

impl InclusionReport {
    pub fn included(&self) -> bool {
        self.rows.iter().all(ArityRow::included)
    }

    pub fn equal(&self) -> bool {
        self.rows.iter().all(ArityRow::equal)
    }
}

/// Compares, arity by arity, the relation clone generated by the cuts of
/// `family`, the finitary invariants of its ω-polymorphisms and the
/// invariants of the finitary polymorphisms of its cuts.
///
/// ω-operations all have positive width, so nullary polymorphisms are left
/// out and the empty relation joins the generators.
pub fn theorem_clone_inclusion_check(
    domain: FiniteDomain,
    family: &[DecSeq],
    caps: InclusionCaps,
) -> Result<InclusionReport> {
    let mut cuts = Vec::new();
    for r in family {
        domain.same_as(r.domain())?;
        for k in 0..=caps.relation_arity {
            cuts.push(r.cut(k)?);
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut generators = cuts.clone();
    if caps.relation_arity > 0 {
        generators.push(FinRel::empty(domain, 1)?);
    }
    let generated = relation_clone_generate(domain, &generators, caps.relation_arity)?;
    let pols: Vec<FinOp> = pol(domain, &cuts, caps.op_arity)?.slices()[1..].iter().flatten().cloned().collect();
    let finite_side = inv(domain, &pols, caps.relation_arity)?;
    let omega_pols = pol_omega(domain, &cuts, caps.width)?;
    let omega_side = inv_finitary(domain, &omega_pols, caps.relation_arity)?;
    let rows = (0..=caps.relation_arity)
        .map(|n| {
            let (g, o, f) = (generated.slice(n), omega_side.slice(n), finite_side.slice(n));
            let missing_g = g.iter().find(|s| o.binary_search(s).is_err());
            let missing_o = o.iter().find(|s| f.binary_search(s).is_err());
            ArityRow {
                arity: n,
                generated: g.len(),
                omega_side: o.len(),
                finite_side: f.len(),
                generated_in_omega: missing_g.is_none(),
                omega_in_finite: missing_o.is_none(),
                witness: missing_g.or(missing_o).cloned(),
            }
        })
        .collect();
    Ok(InclusionReport {
        caps,
        cuts: cuts.len(),
        polymorphisms: pols.len(),
        omega_polymorphisms: omega_pols.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega_rel::{diagonal, from_finitary};

    fn d2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    #[test]
    fn diagonal_family_small_caps() {
        let caps = InclusionCaps { relation_arity: 2, op_arity: 2, width: 1 };
        let report = theorem_clone_inclusion_check(d2(), &[diagonal(d2())], caps).unwrap();
        assert!(report.included(), "{report:?}");
        assert!(report.equal(), "{report:?}");
    }

    #[test]
    fn leq_family_small_caps() {
        let leq = FinRel::from_tuples(d2(), 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
        let caps = InclusionCaps { relation_arity: 2, op_arity: 2, width: 1 };
        let report = theorem_clone_inclusion_check(d2(), &[from_finitary(&leq)], caps).unwrap();
        assert!(report.included(), "{report:?}");
        assert!(report.equal(), "{report:?}");
    }
}
