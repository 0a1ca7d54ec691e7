//! JSON code specs and the constructions they name.

use serde::{Deserialize, Serialize};

use crate::complexes::{BasedComplex, ComplexJson};
use crate::constructions::{
    anisotropic_lineon, cayley_graph, ga_balanced_product, group_algebra_cup, plaquette_ising,
    sipser_spielman, ss_preorientation_lambda2, ss_preorientation_lambda3, tensor_power, torus_code,
    validate_splitting, ConstructionError, Splitting, SplittingHypothesis,
};
use crate::css::CssCode;
use crate::f2linalg::BitVector;
use crate::group::AbelianGroup;
use crate::orientation::{CupStructure, PreOrientation};
use crate::products::{BalancedComplex, CupAlgebra, TensorComplex};

/// A construction plus an optional `Λ` for the gate stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    #[serde(flatten)]
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_lambda: Option<usize>,
}

/// Group elements are monomials such as `x^3y^-1`; polynomials are sums of
/// them. `power`, where present, replaces a classical code by its tensor
/// power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Torus {
        lambda: usize,
        l: usize,
    },
    PlaquetteIsing {
        l: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power: Option<usize>,
    },
    Lineon {
        l: usize,
    },
    GroupAlgebra {
        group: Vec<u32>,
        c: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        splitting: Option<SplittingSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power: Option<usize>,
    },
    BivariateBicycle {
        group: Vec<u32>,
        c1: String,
        c2: String,
        s1: SplittingSpec,
        s2: SplittingSpec,
    },
    /// Local code on the Cayley graph of `group` with generators `T`;
    /// `labels[b]` is the position in `T ++ T⁻¹` of local bit `b`.
    SipserSpielman {
        group: Vec<u32>,
        generators: Vec<String>,
        local_code: ComplexJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<usize>>,
        mode: SsMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        local_in: Option<Vec<bool>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c_hat: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_hat: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power: Option<usize>,
    },
    /// Tensor product of explicitly given oriented classical codes.
    Explicit {
        factors: Vec<ExplicitFactor>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SsMode {
    Lambda2,
    Lambda3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingSpec {
    #[serde(rename = "in", default)]
    pub c_in: String,
    #[serde(default)]
    pub out: String,
    #[serde(default)]
    pub free: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitFactor {
    pub complex: ComplexJson,
    pub orientation: PreOrientation,
}

/// The cup algebra a spec produces.
#[derive(Clone, Debug)]
pub enum Algebra {
    Classical(CupStructure),
    Tensor(TensorComplex),
    Balanced(Box<BalancedComplex>),
}

impl Algebra {
    #[must_use]
    pub fn as_dyn(&self) -> &dyn CupAlgebra {
        match self {
            Algebra::Classical(c) => c,
            Algebra::Tensor(t) => t,
            Algebra::Balanced(b) => b.as_ref(),
        }
    }
}

/// Outcome of a named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok: true,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok: false,
            detail: Some(detail.into()),
        }
    }
}

/// A constructed code with everything the pipeline needs.
#[derive(Clone, Debug)]
pub struct Built {
    pub algebra: Algebra,
    pub code: CssCode,
    /// The oriented classical codes the algebra is built from.
    pub factors: Vec<CupStructure>,
    /// Per-copy `H¹` basis used for logical actions: Künneth for tensor
    /// products, otherwise the code's X logicals.
    pub basis: Vec<BitVector>,
    /// Construction-specific hypothesis checks.
    pub hypotheses: Vec<CheckOutcome>,
}

fn group(orders: &[u32]) -> Result<AbelianGroup, ConstructionError> {
    Ok(AbelianGroup::new(orders)?)
}

fn splitting(g: &AbelianGroup, s: &SplittingSpec) -> Result<Splitting, ConstructionError> {
    Ok(Splitting::parse(g, &s.c_in, &s.out, &s.free)?)
}

fn splitting_check(name: &str, g: &AbelianGroup, c: &[usize], s: &Splitting) -> CheckOutcome {
    match validate_splitting(g, c, s) {
        Ok(_) => CheckOutcome::pass(name),
        Err(r) => CheckOutcome::fail(
            name,
            r.failures
                .iter()
                .map(|f| match f {
                    SplittingHypothesis::SingleIn { size } => format!("|c_in| = {size}"),
                    other => format!("{other:?}"),
                })
                .collect::<Vec<_>>()
                .join(", "),
        ),
    }
}

fn classical(cs: CupStructure, power: Option<usize>, hypotheses: Vec<CheckOutcome>) -> Result<Built, ConstructionError> {
    match power {
        Some(p) if p >= 2 => tensor(tensor_power(&cs, p)?.algebra, hypotheses),
        _ => {
            let code = CssCode::from_complex(cs.complex())?;
            Ok(Built {
                basis: code.x_logicals.clone(),
                factors: vec![cs.clone()],
                algebra: Algebra::Classical(cs),
                code,
                hypotheses,
            })
        }
    }
}

fn tensor(t: TensorComplex, hypotheses: Vec<CheckOutcome>) -> Result<Built, ConstructionError> {
    let code = CssCode::from_complex(t.complex())?;
    let basis = t.kunneth_h1_basis()?.into_iter().map(|(_, c)| c.values).collect();
    Ok(Built {
        factors: t.factors().to_vec(),
        algebra: Algebra::Tensor(t),
        code,
        basis,
        hypotheses,
    })
}

impl CodeSpec {
    /// # Errors
    /// If the parameters violate a constructor's preconditions.
    pub fn build(&self) -> Result<Built, ConstructionError> {
        match &self.construction {
            Construction::Torus { lambda, l } => tensor(torus_code(*lambda, *l)?.algebra, Vec::new()),
            Construction::PlaquetteIsing { l, power } => classical(plaquette_ising(*l)?, *power, Vec::new()),
            Construction::Lineon { l } => tensor(anisotropic_lineon(*l)?.algebra, Vec::new()),
            Construction::GroupAlgebra {
                group: orders,
                c,
                splitting: s,
                power,
            } => {
                let g = group(orders)?;
                let c = g.parse_polynomial(c)?;
                let (s, hyp) = match s {
                    Some(s) => {
                        let s = splitting(&g, s)?;
                        let h = splitting_check("splitting hypotheses", &g, &c, &s);
                        (s, vec![h])
                    }
                    None => (Splitting::new(Vec::new(), Vec::new(), c.clone()), Vec::new()),
                };
                classical(group_algebra_cup(&g, &c, &s)?, *power, hyp)
            }
            Construction::BivariateBicycle { group: orders, c1, c2, s1, s2 } => {
                let g = group(orders)?;
                let c1 = g.parse_polynomial(c1)?;
                let c2 = g.parse_polynomial(c2)?;
                let s1 = splitting(&g, s1)?;
                let s2 = splitting(&g, s2)?;
                let hyp = vec![
                    splitting_check("splitting 1 hypotheses", &g, &c1, &s1),
                    splitting_check("splitting 2 hypotheses", &g, &c2, &s2),
                ];
                let b = ga_balanced_product(&g, &[(c1, s1), (c2, s2)])?;
                Ok(Built {
                    basis: b.code.x_logicals.clone(),
                    factors: b.algebra.tensor().factors().to_vec(),
                    algebra: Algebra::Balanced(Box::new(b.algebra)),
                    code: b.code,
                    hypotheses: hyp,
                })
            }
            Construction::SipserSpielman {
                group: orders,
                generators,
                local_code,
                labels,
                mode,
                local_in,
                c_hat,
                t_hat,
                power,
            } => {
                let g = group(orders)?;
                let t = generators
                    .iter()
                    .map(|s| g.parse(s))
                    .collect::<Result<Vec<_>, _>>()?;
                let cay = cayley_graph(&g, &t)?;
                let local = BasedComplex::from_json(local_code)?;
                let labels = labels.clone().unwrap_or_else(|| (0..2 * t.len()).collect());
                let sys = cay.local_system(local, &labels)?;
                let complex = sipser_spielman(&cay.graph, &sys)?;
                let o = match mode {
                    SsMode::Lambda2 => {
                        let li = local_in
                            .as_ref()
                            .ok_or_else(|| ConstructionError::Parameter("lambda2 mode needs local_in".into()))?;
                        ss_preorientation_lambda2(&cay.graph, &sys, li)?
                    }
                    SsMode::Lambda3 => {
                        let (Some(c), Some(th)) = (c_hat, t_hat) else {
                            return Err(ConstructionError::Parameter("lambda3 mode needs c_hat and t_hat".into()));
                        };
                        ss_preorientation_lambda3(&cay, &sys, &labels, *c, g.parse(th)?)?
                    }
                };
                classical(CupStructure::new(complex, o)?, *power, Vec::new())
            }
            Construction::Explicit { factors } => {
                let mut fs = Vec::with_capacity(factors.len());
                for f in factors {
                    fs.push(CupStructure::new(BasedComplex::from_json(&f.complex)?, f.orientation.clone())?);
                }
                match fs.len() {
                    0 => Err(ConstructionError::Parameter("explicit spec needs a factor".into())),
                    1 => classical(fs.remove(0), None, Vec::new()),
                    _ => tensor(TensorComplex::new(fs)?, Vec::new()),
                }
            }
        }
    }

    /// `Λ` for the gate stage: the spec's value, else the top degree.
    #[must_use]
    pub fn gate_lambda(&self, built: &Built) -> usize {
        self.gate_lambda.unwrap_or_else(|| built.algebra.as_dyn().top_degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build_torus() {
        let s: CodeSpec = serde_json::from_str(r#"{"kind":"torus","lambda":2,"l":3}"#).unwrap();
        let b = s.build().unwrap();
        assert_eq!((b.code.n, b.code.k), (18, 2));
        assert_eq!(s.gate_lambda(&b), 2);
        assert_eq!(b.basis.len(), 2);
    }

    #[test]
    fn group_algebra_spec() {
        let s: CodeSpec = serde_json::from_str(
            r#"{"kind":"group_algebra","group":[6],"c":"x + x^5","splitting":{"in":"x","out":"x^5"}}"#,
        )
        .unwrap();
        let b = s.build().unwrap();
        assert!(b.hypotheses.iter().all(|h| h.ok));
        assert_eq!(b.code.n, 6);
    }

    #[test]
    fn explicit_round_trip() {
        let circle = crate::constructions::repetition_circle(3).unwrap();
        let f = ExplicitFactor {
            complex: circle.complex().to_json(),
            orientation: circle.orientation().clone(),
        };
        let s = CodeSpec {
            construction: Construction::Explicit {
                factors: vec![f.clone(), f],
            },
            gate_lambda: None,
        };
        let text = serde_json::to_string(&s).unwrap();
        let back: CodeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.build().unwrap().code.k, 2);
    }

    #[test]
    fn bad_parameters_rejected() {
        let s: CodeSpec = serde_json::from_str(r#"{"kind":"torus","lambda":1,"l":3}"#).unwrap();
        assert!(s.build().is_err());
        assert!(serde_json::from_str::<CodeSpec>(r#"{"kind":"cube"}"#).is_err());
    }
}
