//! Posedness classification from declared operator attributes.
//!
//! An equation `Ax = y` is well-posed when the range of `A` is closed and its
//! null-space is complemented; otherwise it is ill-posed, of type I if the
//! range contains a closed infinite-dimensional subspace and of type II if it
//! does not. Unknown flags never get guessed: they make the verdict
//! [`Verdict::Undecidable`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::operators::{compose_attributes, product_attributes, Decay, OperatorAttributes, Tri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    WellPosed,
    IllPosedTypeI,
    IllPosedTypeII,
    Undecidable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WellPosed => "WellPosed",
            Verdict::IllPosedTypeI => "IllPosedTypeI",
            Verdict::IllPosedTypeII => "IllPosedTypeII",
            Verdict::Undecidable => "Undecidable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosednessClass {
    pub verdict: Verdict,
    /// Strictly singular with a closed infinite-dimensional subspace in the range.
    pub hybrid: bool,
    pub rationale: Vec<String>,
}

/// Total decision procedure over the tri-state flags.
pub fn classify(attrs: &OperatorAttributes) -> PosednessClass {
    let mut rationale = Vec::new();
    let hybrid = attrs.strictly_singular.is_true() && attrs.range_has_closed_infdim_subspace.is_true();
    if hybrid {
        rationale.push(
            "hybrid: strictly singular with a closed infinite-dimensional subspace in the range, \
             hence the null-space is uncomplemented"
                .to_string(),
        );
        rationale.push("range contains a closed infinite-dimensional subspace: type I".to_string());
        return PosednessClass {
            verdict: Verdict::IllPosedTypeI,
            hybrid,
            rationale,
        };
    }

    let rc = attrs.range_closed;
    let compl = attrs.nullspace_complemented;
    let ill_posed = if rc.is_false() || compl.is_false() {
        if rc.is_false() {
            rationale.push("range is not closed".to_string());
        }
        if compl.is_false() {
            rationale.push("null-space is not complemented".to_string());
        }
        true
    } else if rc.is_true() && compl.is_true() {
        rationale.push("closed range and complemented null-space: well-posed".to_string());
        return PosednessClass {
            verdict: Verdict::WellPosed,
            hybrid,
            rationale,
        };
    } else {
        rationale.push(format!(
            "cannot decide well-posedness: range_closed = {rc}, nullspace_complemented = {compl}"
        ));
        false
    };

    let verdict = if !ill_posed {
        Verdict::Undecidable
    } else {
        match attrs.range_has_closed_infdim_subspace {
            Tri::True => {
                rationale.push("range contains a closed infinite-dimensional subspace: type I".into());
                Verdict::IllPosedTypeI
            }
            Tri::False => {
                rationale.push("range has no closed infinite-dimensional subspace: type II".into());
                Verdict::IllPosedTypeII
            }
            Tri::Unknown => {
                rationale.push("ill-posed, but the subspace flag is unknown".into());
                Verdict::Undecidable
            }
        }
    };
    PosednessClass {
        verdict,
        hybrid,
        rationale,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4];

    pub fn citation(self) -> &'static str {
        match self {
            Rule::R1 => {
                "a strictly singular operator whose range contains a closed infinite-dimensional \
                 subspace is not compact and its null-space is uncomplemented"
            }
            Rule::R2 => {
                "an injective strictly singular operator with closed range has finite-dimensional range"
            }
            Rule::R3 => {
                "a weak*-to-weak continuous operator on l^1 with infinite-dimensional range is \
                 ill-posed of type II"
            }
            Rule::R4 => "an operator with finite-dimensional range is compact, hence strictly singular, with closed range",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub citation: String,
    pub detail: String,
}

impl Violation {
    fn new(rule: Rule, detail: String) -> Self {
        Self {
            rule,
            citation: rule.citation().to_string(),
            detail,
        }
    }
}

/// Flags combinations that contradict known implications between attributes.
pub fn check_consistency(attrs: &OperatorAttributes) -> Vec<Violation> {
    let mut out = Vec::new();
    let a = attrs;

    if a.strictly_singular.is_true() && a.range_has_closed_infdim_subspace.is_true() {
        if a.compact.is_true() {
            out.push(Violation::new(Rule::R1, "hybrid operator declared compact".into()));
        }
        if a.nullspace_complemented.is_true() {
            out.push(Violation::new(
                Rule::R1,
                "hybrid operator declared with complemented null-space".into(),
            ));
        }
    }

    if a.injective.is_true() && a.strictly_singular.is_true() && a.range_closed.is_true() {
        if a.range_has_closed_infdim_subspace.is_true() {
            out.push(Violation::new(
                Rule::R2,
                "range must be finite-dimensional but contains a closed infinite-dimensional subspace".into(),
            ));
        }
        if a.finite_dimensional_range.is_false() {
            out.push(Violation::new(
                Rule::R2,
                "range must be finite-dimensional but is declared infinite-dimensional".into(),
            ));
        }
    }

    let infinite_range =
        a.finite_dimensional_range.is_false() || a.range_has_closed_infdim_subspace.is_true();
    if a.weakstar_to_weak_continuous.is_true() && infinite_range {
        let verdict = classify(a).verdict;
        if matches!(verdict, Verdict::IllPosedTypeI | Verdict::WellPosed) {
            out.push(Violation::new(Rule::R3, format!("classified as {verdict}")));
        }
    }

    if a.finite_dimensional_range.is_true() {
        for (name, flag) in [
            ("strictly_singular", a.strictly_singular),
            ("compact", a.compact),
            ("range_closed", a.range_closed),
        ] {
            if flag.is_false() {
                out.push(Violation::new(Rule::R4, format!("finite-dimensional range but {name} = false")));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub attributes: OperatorAttributes,
    pub expected_verdict: Verdict,
    pub expected_hybrid: bool,
}

impl CatalogEntry {
    fn new(
        name: &str,
        description: &str,
        attributes: OperatorAttributes,
        expected_verdict: Verdict,
        expected_hybrid: bool,
    ) -> Self {
        Self {
            name: name.to_string(),
            description: description.to_string(),
            attributes,
            expected_verdict,
            expected_hybrid,
        }
    }
}

/// Named operators with their attributes and expected classes.
///
/// Composite attributes are obtained with the same propagation rules used by
/// the operator constructors, so the catalog agrees with what
/// [`crate::operators::compose`] and [`crate::operators::block_product`] derive.
pub fn catalog() -> Vec<CatalogEntry> {
    let b = OperatorAttributes::mazur();
    let e = OperatorAttributes::embedding(2.0);
    let c = OperatorAttributes::diagonal(2.0, Decay::Vanishing);
    let i2 = OperatorAttributes::identity(2.0);
    let d1 = product_attributes(&c, &i2);
    let d2 = product_attributes(&i2, &c);
    let d2d1 = product_attributes(
        &compose_attributes(&i2, &c, true),
        &compose_attributes(&c, &i2, true),
    );
    use Verdict::*;
    vec![
        CatalogEntry::new("B", "Mazur-type surjection l^1 -> l^2", b, IllPosedTypeI, true),
        CatalogEntry::new("E_2^p", "embedding l^2 -> l^4", e, IllPosedTypeII, false),
        CatalogEntry::new(
            "diag",
            "diagonal operator with weights 1/k on l^1",
            OperatorAttributes::diagonal(1.0, Decay::Vanishing),
            IllPosedTypeII,
            false,
        ),
        CatalogEntry::new(
            "E∘B",
            "embedding composed with B",
            compose_attributes(&e, &b, true),
            IllPosedTypeII,
            false,
        ),
        CatalogEntry::new(
            "C∘B",
            "compact diagonal composed with B",
            compose_attributes(&c, &b, true),
            IllPosedTypeII,
            false,
        ),
        CatalogEntry::new(
            "(B,I)",
            "B beside the identity on l^2",
            product_attributes(&b, &i2),
            IllPosedTypeI,
            false,
        ),
        CatalogEntry::new("D1", "(C, I) with C = diag(1/k) on l^2", d1, IllPosedTypeI, false),
        CatalogEntry::new("D2", "(I, C) with C = diag(1/k) on l^2", d2, IllPosedTypeI, false),
        CatalogEntry::new("D2∘D1", "(C, C) obtained as D2 after D1", d2d1, IllPosedTypeII, false),
        CatalogEntry::new(
            "injective_counterexample",
            "x -> (sum x_l, x_2/2, x_3/3, ...) on l^1",
            OperatorAttributes::injective_counterexample(),
            IllPosedTypeII,
            false,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(name: &str) -> CatalogEntry {
        catalog().into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn catalog_verdicts() {
        let entries = catalog();
        assert_eq!(entries.len(), 10);
        for e in &entries {
            let class = classify(&e.attributes);
            assert_eq!(class.verdict, e.expected_verdict, "{}", e.name);
            assert_eq!(class.hybrid, e.expected_hybrid, "{}", e.name);
            assert!(check_consistency(&e.attributes).is_empty(), "{}", e.name);
        }
    }

    #[test]
    fn dividing_line_can_be_crossed() {
        assert_eq!(classify(&entry("D1").attributes).verdict, Verdict::IllPosedTypeI);
        assert_eq!(classify(&entry("D2").attributes).verdict, Verdict::IllPosedTypeI);
        assert_eq!(classify(&entry("D2∘D1").attributes).verdict, Verdict::IllPosedTypeII);
    }

    #[test]
    fn simple_cases() {
        let id = classify(&OperatorAttributes::identity(2.0));
        assert_eq!(id.verdict, Verdict::WellPosed);
        assert!(!id.hybrid);
        assert_eq!(classify(&OperatorAttributes::default()).verdict, Verdict::Undecidable);
        let class = classify(&entry("(B,I)").attributes);
        assert_eq!(class.verdict, Verdict::IllPosedTypeI);
        assert!(!class.hybrid);
        assert!(!class.rationale.is_empty());
    }

    fn sweep() -> impl Iterator<Item = OperatorAttributes> {
        (0..3usize.pow(9)).map(|mut code| {
            let mut f = [Tri::Unknown; 9];
            for slot in &mut f {
                *slot = Tri::ALL[code % 3];
                code /= 3;
            }
            OperatorAttributes::from_fields(f)
        })
    }

    #[test]
    fn exhaustive_sweep_matches_decision_table() {
        for a in sweep() {
            let class = classify(&a);
            let _ = check_consistency(&a);
            let hybrid = a.strictly_singular.is_true() && a.range_has_closed_infdim_subspace.is_true();
            assert_eq!(class.hybrid, hybrid);
            let expected = if hybrid {
                Verdict::IllPosedTypeI
            } else if a.range_closed.is_true() && a.nullspace_complemented.is_true() {
                Verdict::WellPosed
            } else if a.range_closed.is_false() || a.nullspace_complemented.is_false() {
                match a.range_has_closed_infdim_subspace {
                    Tri::True => Verdict::IllPosedTypeI,
                    Tri::False => Verdict::IllPosedTypeII,
                    Tri::Unknown => Verdict::Undecidable,
                }
            } else {
                Verdict::Undecidable
            };
            assert_eq!(class.verdict, expected, "{a:?}");
            if class.hybrid {
                assert_eq!(class.verdict, Verdict::IllPosedTypeI);
            }
        }
    }

    #[test]
    fn each_rule_fires_on_a_corrupted_record() {
        let mut r1 = OperatorAttributes::mazur();
        r1.compact = Tri::True;

        let mut r2 = OperatorAttributes::embedding(2.0);
        r2.range_closed = Tri::True;

        let mut r3 = OperatorAttributes::diagonal(1.0, Decay::Vanishing);
        r3.range_closed = Tri::True;
        r3.range_has_closed_infdim_subspace = Tri::True;
        r3.strictly_singular = Tri::False;
        r3.nullspace_complemented = Tri::False;

        let mut r4 = OperatorAttributes::injective_counterexample();
        r4.finite_dimensional_range = Tri::True;

        for (rule, attrs) in [(Rule::R1, r1), (Rule::R2, r2), (Rule::R3, r3), (Rule::R4, r4)] {
            let found = check_consistency(&attrs);
            assert!(found.iter().any(|v| v.rule == rule), "{rule}: {found:?}");
            assert!(found.iter().all(|v| !v.citation.is_empty()));
        }
    }
}
