//! Intersection arrays: parsing, validation, derived counts and the named families.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The parameter list `(b_0, ..., b_{D-1}; c_1, ..., c_D)` of a distance-regular graph.
///
/// Construction always validates: `c_1 = 1`, every entry positive, every `a_i`
/// nonnegative, every sphere size `k_i` integral and `n k` even.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntersectionArray {
    b: Vec<u64>,
    c: Vec<u64>,
    sizes: Vec<u64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Result<Self> {
        if b.is_empty() || c.is_empty() {
            return Err(Error::Invalid("diameter must be at least 1".into()));
        }
        if b.len() != c.len() {
            return Err(Error::Invalid(format!(
                "b has {} entries but c has {}",
                b.len(),
                c.len()
            )));
        }
        let diameter = b.len();
        if let Some(i) = b.iter().position(|&x| x == 0) {
            return Err(Error::Invalid(format!("b_{i} must be positive")));
        }
        if let Some(i) = c.iter().position(|&x| x == 0) {
            return Err(Error::Invalid(format!("c_{} must be positive", i + 1)));
        }
        if c[0] != 1 {
            return Err(Error::Invalid(format!("c_1 must equal 1, found {}", c[0])));
        }
        let k = b[0];
        for i in 1..=diameter {
            let bi = if i < diameter { b[i] } else { 0 };
            let ci = c[i - 1];
            if bi + ci > k {
                return Err(Error::Invalid(format!("a_{i} = {k} - {bi} - {ci} is negative")));
            }
        }
        let mut sizes = Vec::with_capacity(diameter + 1);
        sizes.push(1u64);
        for i in 0..diameter {
            let num = sizes[i]
                .checked_mul(b[i])
                .ok_or_else(|| Error::Invalid(format!("k_{} overflows", i + 1)))?;
            let den = c[i];
            if num % den != 0 {
                return Err(Error::Invalid(format!("k_{} = {num}/{den} is not an integer", i + 1)));
            }
            sizes.push(num / den);
        }
        let n: u64 = sizes
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::Invalid("vertex count overflows".into()))?;
        if n.checked_mul(k).is_none_or(|nk| nk % 2 != 0) {
            return Err(Error::Invalid(format!(
                "n k = {n} * {k} is odd, so no edge count exists"
            )));
        }
        Ok(Self { b, c, sizes })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// Valency `k = b_0`.
    pub fn degree(&self) -> u64 {
        self.b[0]
    }

    /// `b_i` for `0 <= i <= D`, with `b_D = 0`.
    pub fn b(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` for `0 <= i <= D`, with `c_0 = 0`.
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `a_i = k - b_i - c_i`.
    pub fn a(&self, i: usize) -> u64 {
        self.degree() - self.b(i) - self.c(i)
    }

    pub fn b_list(&self) -> &[u64] {
        &self.b
    }

    pub fn c_list(&self) -> &[u64] {
        &self.c
    }

    /// Sphere size `k_i = |K_i(x)|`.
    pub fn sphere_size(&self, i: usize) -> u64 {
        self.sizes[i]
    }

    pub fn vertex_count(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// A distance-regular graph is bipartite exactly when every `a_i` vanishes,
    /// equivalently when `-k` is an eigenvalue.
    pub fn is_bipartite(&self) -> bool {
        (0..=self.diameter()).all(|i| self.a(i) == 0)
    }

    /// Standard feasibility conditions that are reported but never enforced.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 1..self.b.len() {
            if self.b[i] > self.b[i - 1] {
                out.push(format!("b is not nonincreasing at b_{i}"));
            }
        }
        for i in 1..self.c.len() {
            if self.c[i] < self.c[i - 1] {
                out.push(format!("c is not nondecreasing at c_{}", i + 1));
            }
        }
        out
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.b), join(&self.c))
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|_| Error::Syntax(format!("{what} entry {t:?} is not a nonnegative integer")))
        })
        .collect()
}

/// Parses `"b_0,...,b_{D-1};c_1,...,c_D"`. Whitespace is ignored.
pub fn parse_array(text: &str) -> Result<IntersectionArray> {
    let compact: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let mut parts = compact.split(';');
    let (Some(b), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Syntax(format!(
            "expected \"b_0,...;c_1,...\" with exactly one ';', got {text:?}"
        )));
    };
    if b.is_empty() || c.is_empty() {
        return Err(Error::Syntax("both b and c lists must be nonempty".into()));
    }
    IntersectionArray::new(parse_list(b, "b")?, parse_list(c, "c")?)
}

impl FromStr for IntersectionArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_array(s)
    }
}

/// Counts derived from an array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCounts {
    /// `k_0 = 1, k_1, ..., k_D`.
    pub sphere_sizes: Vec<u64>,
    pub vertices: u64,
    pub edges: u64,
    /// `e_i = k_i c_i` for `1 <= i <= D`, stored at index `i - 1`.
    pub boundary_edges: Vec<u64>,
}

pub fn derive_counts(arr: &IntersectionArray) -> DerivedCounts {
    let d = arr.diameter();
    let sphere_sizes: Vec<u64> = (0..=d).map(|i| arr.sphere_size(i)).collect();
    let vertices = arr.vertex_count();
    let boundary_edges = (1..=d).map(|i| sphere_sizes[i] * arr.c(i)).collect();
    DerivedCounts {
        sphere_sizes,
        vertices,
        edges: vertices * arr.degree() / 2,
        boundary_edges,
    }
}

/// A named family of distance-regular graphs with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Complete { n: u64 },
    Cycle { n: u64 },
    Hamming { m: u64, q: u64 },
    Johnson { m: u64, q: u64 },
    Odd { m: u64 },
    Petersen,
    Dodecahedron,
    BiggsSmith,
}

pub const PETERSEN: &str = "3,2;1,1";
pub const DODECAHEDRON: &str = "3,2,1,1,1;1,1,1,2,3";
pub const BIGGS_SMITH: &str = "3,2,2,2,1,1,1;1,1,1,1,1,1,3";

impl FamilySpec {
    /// Parses `"name"` or `"name:p1,p2"`, e.g. `"hamming:7,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        let (name, params) = match compact.split_once(':') {
            Some((name, rest)) => (name.to_ascii_lowercase(), parse_list(rest, "family parameter")?),
            None => (compact.to_ascii_lowercase(), Vec::new()),
        };
        let arity = |expected: usize| -> Result<()> {
            if params.len() == expected {
                Ok(())
            } else {
                Err(Error::Syntax(format!(
                    "family {name} takes {expected} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let spec = match name.as_str() {
            "complete" => {
                arity(1)?;
                Self::Complete { n: params[0] }
            }
            "cycle" => {
                arity(1)?;
                Self::Cycle { n: params[0] }
            }
            "hamming" => {
                arity(2)?;
                Self::Hamming {
                    m: params[0],
                    q: params[1],
                }
            }
            "johnson" => {
                arity(2)?;
                Self::Johnson {
                    m: params[0],
                    q: params[1],
                }
            }
            "odd" => {
                arity(1)?;
                Self::Odd { m: params[0] }
            }
            "petersen" => {
                arity(0)?;
                Self::Petersen
            }
            "dodecahedron" => {
                arity(0)?;
                Self::Dodecahedron
            }
            "biggs-smith" | "biggssmith" => {
                arity(0)?;
                Self::BiggsSmith
            }
            "grassmann" | "grassman" => {
                return Err(Error::Unsupported(
                    "the Grassmann family is out of scope: generating its array needs \
                     q-binomial machinery this library does not provide; pass --array instead"
                        .into(),
                ))
            }
            other => return Err(Error::Syntax(format!("unknown family {other:?}"))),
        };
        spec.check_range()?;
        Ok(spec)
    }

    pub fn check_range(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::OutOfRange(msg));
        match *self {
            Self::Complete { n } if n < 2 => fail(format!("complete needs n >= 2, got {n}")),
            Self::Cycle { n } if n < 3 => fail(format!("cycle needs n >= 3, got {n}")),
            Self::Hamming { m, q } if m < 1 || q < 2 => {
                fail(format!("hamming needs m >= 1 and q >= 2, got m={m}, q={q}"))
            }
            Self::Johnson { m, q } if q < 1 || 2 * q > m => fail(format!(
                "johnson needs 1 <= q and 2q <= m (complement q first), got m={m}, q={q}"
            )),
            Self::Odd { m } if m < 2 => fail(format!("odd needs m >= 2, got {m}")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Complete { n } => write!(f, "complete:{n}"),
            Self::Cycle { n } => write!(f, "cycle:{n}"),
            Self::Hamming { m, q } => write!(f, "hamming:{m},{q}"),
            Self::Johnson { m, q } => write!(f, "johnson:{m},{q}"),
            Self::Odd { m } => write!(f, "odd:{m}"),
            Self::Petersen => f.write_str("petersen"),
            Self::Dodecahedron => f.write_str("dodecahedron"),
            Self::BiggsSmith => f.write_str("biggs-smith"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// The intersection array of a named family.
pub fn generate_family(spec: &FamilySpec) -> Result<IntersectionArray> {
    spec.check_range()?;
    let (b, c): (Vec<u64>, Vec<u64>) = match *spec {
        FamilySpec::Complete { n } => (vec![n - 1], vec![1]),
        FamilySpec::Cycle { n } => {
            let d = (n / 2) as usize;
            let mut b = vec![1; d];
            b[0] = 2;
            let mut c = vec![1; d];
            c[d - 1] = 2 - n % 2;
            (b, c)
        }
        FamilySpec::Hamming { m, q } => ((0..m).map(|i| (m - i) * (q - 1)).collect(), (1..=m).collect()),
        FamilySpec::Johnson { m, q } => (
            (0..q).map(|i| (q - i) * (m - q - i)).collect(),
            (1..=q).map(|i| i * i).collect(),
        ),
        FamilySpec::Odd { m } => {
            let d = m - 1;
            let b = (0..d).map(|i| if i == 0 { m } else { m - i.div_ceil(2) }).collect();
            let c = (1..=d).map(|i| i.div_ceil(2)).collect();
            (b, c)
        }
        FamilySpec::Petersen => return generate_family(&FamilySpec::Odd { m: 3 }),
        FamilySpec::Dodecahedron => return parse_array(DODECAHEDRON),
        FamilySpec::BiggsSmith => return parse_array(BIGGS_SMITH),
    };
    IntersectionArray::new(b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(text: &str) -> IntersectionArray {
        parse_array(text).unwrap()
    }

    #[test]
    fn parses_named_arrays() {
        let p = arr("3,2;1,1");
        assert_eq!(p.diameter(), 2);
        assert_eq!(p.degree(), 3);
        let d = arr(DODECAHEDRON);
        assert_eq!(d.diameter(), 5);
        assert_eq!(arr(" 3, 2 ; 1 ,1 "), p);
    }

    #[test]
    fn accepts_integral_large_c() {
        let a = arr("3,2;1,3");
        assert_eq!(a.sphere_size(2), 2);
        assert_eq!(a.a(2), 0);
    }

    #[test]
    fn rejects_nonintegral_sphere() {
        let err = parse_array("4,2;1,3").unwrap_err();
        assert!(matches!(&err, Error::Invalid(msg) if msg.contains("k_2")), "{err}");
    }

    #[test]
    fn rejects_negative_a() {
        let err = parse_array("3,3;1,1").unwrap_err();
        assert!(matches!(&err, Error::Invalid(msg) if msg.contains("a_1")), "{err}");
        let err = parse_array("3,2;1,4").unwrap_err();
        assert!(matches!(&err, Error::Invalid(msg) if msg.contains("a_2")), "{err}");
    }

    #[test]
    fn rejects_bad_c1_and_zeros() {
        assert!(matches!(parse_array("3,2;2,1"), Err(Error::Invalid(_))));
        assert!(matches!(parse_array("3,0;1,1"), Err(Error::Invalid(_))));
    }

    #[test]
    fn rejects_odd_nk() {
        // K_1 style degenerate arrays cannot appear, but an odd n k can.
        assert!(matches!(parse_array("3,1;1,3"), Err(Error::Invalid(_))));
    }

    #[test]
    fn syntax_errors() {
        for text in ["3,2", "3,2;1,1;1", "3,x;1,1", ";1", "3,-2;1,1"] {
            assert!(matches!(parse_array(text), Err(Error::Syntax(_))), "{text}");
        }
        assert!(matches!(parse_array("3,2;1"), Err(Error::Invalid(_))));
    }

    #[test]
    fn petersen_counts() {
        let c = derive_counts(&arr(PETERSEN));
        assert_eq!(c.sphere_sizes, vec![1, 3, 6]);
        assert_eq!(c.vertices, 10);
        assert_eq!(c.edges, 15);
        assert_eq!(c.boundary_edges, vec![3, 6]);
    }

    #[test]
    fn biggs_smith_counts() {
        let c = derive_counts(&arr(BIGGS_SMITH));
        assert_eq!(c.vertices, 102);
        assert_eq!(c.edges, 153);
    }

    #[test]
    fn complete_counts() {
        for n in 2..10u64 {
            let c = derive_counts(&generate_family(&FamilySpec::Complete { n }).unwrap());
            assert_eq!(c.sphere_sizes, vec![1, n - 1]);
            assert_eq!(c.vertices, n);
            assert_eq!(c.edges, n * (n - 1) / 2);
        }
    }

    #[test]
    fn family_examples() {
        assert_eq!(generate_family(&FamilySpec::Odd { m: 3 }).unwrap(), arr("3,2;1,1"));
        assert_eq!(
            generate_family(&FamilySpec::Hamming { m: 7, q: 2 }).unwrap(),
            arr("7,6,5,4,3,2,1;1,2,3,4,5,6,7")
        );
        assert_eq!(generate_family(&FamilySpec::Odd { m: 4 }).unwrap(), arr("4,3,3;1,1,2"));
        assert_eq!(generate_family(&FamilySpec::Petersen).unwrap(), arr(PETERSEN));
        assert_eq!(generate_family(&FamilySpec::Cycle { n: 4 }).unwrap(), arr("2,1;1,2"));
        assert_eq!(generate_family(&FamilySpec::Cycle { n: 5 }).unwrap(), arr("2,1;1,1"));
        assert_eq!(
            generate_family(&FamilySpec::Johnson { m: 5, q: 2 }).unwrap(),
            arr("6,2;1,4")
        );
    }

    #[test]
    fn family_text() {
        assert_eq!(
            FamilySpec::parse("hamming:7,2").unwrap(),
            FamilySpec::Hamming { m: 7, q: 2 }
        );
        assert_eq!(FamilySpec::parse("Petersen").unwrap(), FamilySpec::Petersen);
        assert!(matches!(FamilySpec::parse("grassmann:4,2"), Err(Error::Unsupported(_))));
        assert!(matches!(FamilySpec::parse("johnson:5,3"), Err(Error::OutOfRange(_))));
        assert!(matches!(FamilySpec::parse("cycle:2"), Err(Error::OutOfRange(_))));
        assert!(matches!(FamilySpec::parse("hamming:3"), Err(Error::Syntax(_))));
        assert!(matches!(FamilySpec::parse("klein"), Err(Error::Syntax(_))));
        let spec = FamilySpec::Johnson { m: 10, q: 4 };
        assert_eq!(FamilySpec::parse(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn monotonicity_is_only_a_warning() {
        let a = arr("3,2;1,3");
        assert!(a.warnings().is_empty());
        let odd = arr("5,4,4,3;1,1,2,2");
        assert!(odd.warnings().is_empty());
        // b_2 > b_1, accepted with a warning.
        let w = arr("4,1,2;1,1,1");
        assert_eq!(w.warnings().len(), 1);
    }

    #[test]
    fn bipartite_detection() {
        assert!(generate_family(&FamilySpec::Hamming { m: 3, q: 2 })
            .unwrap()
            .is_bipartite());
        assert!(!arr(PETERSEN).is_bipartite());
    }
}
