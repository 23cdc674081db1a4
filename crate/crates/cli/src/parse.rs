//! Option values that accept the same text on the command line and in a
//! config file. Lists may also be given as JSON arrays in the config file.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};

/// Comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<T>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(items))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawList<T> {
    Items(Vec<T>),
    Text(String),
}

impl<'de, T> Deserialize<'de> for List<T>
where
    T: FromStr + Deserialize<'de>,
    T::Err: fmt::Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawList::<T>::deserialize(d)? {
            RawList::Items(items) if !items.is_empty() => Ok(List(items)),
            RawList::Items(_) => Err(serde::de::Error::custom("empty list")),
            RawList::Text(text) => text.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Deserializes through `FromStr`, also accepting a numeric array written as
/// a comma-separated list.
fn text_or_numbers<'de, D, T>(d: D) -> Result<T, D::Error>
where
    D: Deserializer<'de>,
    T: FromStr<Err = String>,
{
    match RawList::<f64>::deserialize(d)? {
        RawList::Text(text) => text.parse().map_err(serde::de::Error::custom),
        RawList::Items(values) => {
            let joined: Vec<String> = values.iter().map(f64::to_string).collect();
            joined.join(",").parse().map_err(serde::de::Error::custom)
        }
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    let List(values) = s.parse::<List<f64>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("non-finite value".into());
    }
    Ok(values)
}

/// Data vector for the collapse experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum YSpec {
    /// `randomN`: N seeded uniform entries in (-1, 1), scaled to unit norm.
    Random(usize),
    Values(Vec<f64>),
}

impl FromStr for YSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(n) = s.trim().strip_prefix("random") {
            let n: usize = n.parse().map_err(|_| format!("expected randomN, got `{s}`"))?;
            if n == 0 {
                return Err("randomN needs N >= 1".into());
            }
            return Ok(YSpec::Random(n));
        }
        parse_floats(s).map(YSpec::Values)
    }
}

impl<'de> Deserialize<'de> for YSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        text_or_numbers(d)
    }
}

impl fmt::Display for YSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YSpec::Random(n) => write!(f, "random{n}"),
            YSpec::Values(v) => write!(f, "{}", join(v)),
        }
    }
}

/// A vector in the codomain (functional for probes) or the domain (exact
/// solution for convergence runs).
#[derive(Debug, Clone, PartialEq)]
pub enum EtaSpec {
    /// `zeta:K`, the K-th enumerated direction.
    Zeta(usize),
    /// `e:K`, the K-th unit vector.
    Unit(usize),
    /// `ones`, the normalized all-ones vector.
    Ones,
    Values(Vec<f64>),
}

impl FromStr for EtaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let index = |t: &str| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("expected a 1-based index, got `{t}`")),
        };
        if let Some(k) = s.strip_prefix("zeta:") {
            return index(k).map(EtaSpec::Zeta);
        }
        if let Some(k) = s.strip_prefix("e:") {
            return index(k).map(EtaSpec::Unit);
        }
        if s == "ones" {
            return Ok(EtaSpec::Ones);
        }
        parse_floats(s).map(EtaSpec::Values)
    }
}

impl<'de> Deserialize<'de> for EtaSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        text_or_numbers(d)
    }
}

impl fmt::Display for EtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaSpec::Zeta(k) => write!(f, "zeta:{k}"),
            EtaSpec::Unit(k) => write!(f, "e:{k}"),
            EtaSpec::Ones => write!(f, "ones"),
            EtaSpec::Values(v) => write!(f, "{}", join(v)),
        }
    }
}

/// Named operators available from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSpec {
    Mazur,
    Diag,
    Injective,
    Identity,
    Embedding,
    DiagAfterMazur,
    EmbeddingAfterMazur,
    MazurBesideIdentity,
    D1,
    D2,
    D2AfterD1,
}

impl OperatorSpec {
    pub fn name(self) -> &'static str {
        match self {
            OperatorSpec::Mazur => "B",
            OperatorSpec::Diag => "diag",
            OperatorSpec::Injective => "injective",
            OperatorSpec::Identity => "identity",
            OperatorSpec::Embedding => "embedding",
            OperatorSpec::DiagAfterMazur => "C∘B",
            OperatorSpec::EmbeddingAfterMazur => "E∘B",
            OperatorSpec::MazurBesideIdentity => "(B,I)",
            OperatorSpec::D1 => "D1",
            OperatorSpec::D2 => "D2",
            OperatorSpec::D2AfterD1 => "D2∘D1",
        }
    }

    /// True for operators built on top of the enumerated directions.
    pub fn uses_directions(self) -> bool {
        matches!(
            self,
            OperatorSpec::Mazur
                | OperatorSpec::DiagAfterMazur
                | OperatorSpec::EmbeddingAfterMazur
                | OperatorSpec::MazurBesideIdentity
        )
    }
}

impl FromStr for OperatorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '∘' || c == '.' { 'o' } else { c })
            .collect();
        Ok(match key.as_str() {
            "B" | "mazur" => OperatorSpec::Mazur,
            "diag" | "C" => OperatorSpec::Diag,
            "injective" | "injective_counterexample" | "A_inj" => OperatorSpec::Injective,
            "identity" | "I" => OperatorSpec::Identity,
            "embedding" | "E" => OperatorSpec::Embedding,
            "CoB" | "CB" => OperatorSpec::DiagAfterMazur,
            "EoB" | "EB" => OperatorSpec::EmbeddingAfterMazur,
            "(B,I)" | "BI" => OperatorSpec::MazurBesideIdentity,
            "D1" => OperatorSpec::D1,
            "D2" => OperatorSpec::D2,
            "D2oD1" | "D2D1" => OperatorSpec::D2AfterD1,
            _ => return Err(format!("unknown operator `{s}`")),
        })
    }
}

impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse_from_text_and_json() {
        assert_eq!("1, 2,3".parse::<List<usize>>().unwrap(), List(vec![1, 2, 3]));
        assert!("".parse::<List<usize>>().is_err());
        let from_json: List<f64> = serde_json::from_str("[0.5, -1]").unwrap();
        assert_eq!(from_json, List(vec![0.5, -1.0]));
        let from_text: List<f64> = serde_json::from_str("\"0.5,-1\"").unwrap();
        assert_eq!(from_text, from_json);
    }

    #[test]
    fn data_and_functional_specs() {
        assert_eq!("random4".parse::<YSpec>().unwrap(), YSpec::Random(4));
        assert_eq!("0.3,-0.9".parse::<YSpec>().unwrap(), YSpec::Values(vec![0.3, -0.9]));
        assert!("random0".parse::<YSpec>().is_err());
        assert!("nan".parse::<YSpec>().is_err());
        assert_eq!("zeta:3".parse::<EtaSpec>().unwrap(), EtaSpec::Zeta(3));
        assert_eq!("e:1".parse::<EtaSpec>().unwrap(), EtaSpec::Unit(1));
        assert!("e:0".parse::<EtaSpec>().is_err());
        let y: YSpec = serde_json::from_str("[1, 2]").unwrap();
        assert_eq!(y, YSpec::Values(vec![1.0, 2.0]));
    }

    #[test]
    fn operator_names_and_aliases() {
        assert_eq!("C∘B".parse::<OperatorSpec>().unwrap(), OperatorSpec::DiagAfterMazur);
        assert_eq!("CB".parse::<OperatorSpec>().unwrap(), OperatorSpec::DiagAfterMazur);
        assert_eq!("(B, I)".parse::<OperatorSpec>().unwrap(), OperatorSpec::MazurBesideIdentity);
        assert_eq!("D2∘D1".parse::<OperatorSpec>().unwrap(), OperatorSpec::D2AfterD1);
        assert!("X".parse::<OperatorSpec>().is_err());
        for spec in [
            OperatorSpec::Mazur,
            OperatorSpec::EmbeddingAfterMazur,
            OperatorSpec::D2AfterD1,
            OperatorSpec::MazurBesideIdentity,
        ] {
            assert_eq!(spec.name().parse::<OperatorSpec>().unwrap(), spec);
        }
    }
}
