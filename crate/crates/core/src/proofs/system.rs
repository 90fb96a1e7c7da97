//! Inference rules and named axiom systems.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use super::schema::{AxiomName, UnknownName};
use crate::checker::QuantifierDomain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// From `φ` and `φ -> ψ` infer `ψ`.
    Mp,
    /// From `φ` infer `K_i φ`.
    GenK,
    /// From `φ` infer `A_i φ -> X_i φ`.
    GenX,
    /// From `φ` infer `A*_i φ -> K_i φ`.
    GenStar,
    /// From `φ` infer `forall x. φ[q/x]`.
    GenForall,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Mp, Rule::GenK, Rule::GenX, Rule::GenStar, Rule::GenForall];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Mp => "MP",
            Rule::GenK => "Gen_K",
            Rule::GenX => "Gen_X",
            Rule::GenStar => "Gen*",
            Rule::GenForall => "Gen_forall",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Mp => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('∀', "forall");
        Rule::ALL.into_iter().find(|r| r.as_str() == norm).ok_or_else(|| UnknownName(s.into()))
    }
}

/// Which operators a system's language has.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub k: bool,
    pub a: bool,
    pub x: bool,
    pub forall: bool,
}

impl Signature {
    pub const KXA: Self = Signature { k: true, a: true, x: true, forall: true };
    pub const XA: Self = Signature { k: false, a: true, x: true, forall: true };
    pub const K: Self = Signature { k: true, a: false, x: false, forall: true };
    pub const K_QF: Self = Signature { k: true, a: false, x: false, forall: false };

    /// The quantifier domain matching this language.
    pub fn domain(self) -> QuantifierDomain {
        QuantifierDomain { not: true, and: true, k: self.k, a: self.a, x: self.x, include_top: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSystem {
    pub name: String,
    pub schemas: BTreeSet<AxiomName>,
    pub rules: BTreeSet<Rule>,
    pub signature: Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("unknown axiom system `{0}`")]
    UnknownSystem(String),
    #[error("unknown extension `{0}`; expected T45, TX4X5X, T45star or an axiom name")]
    UnknownExtension(String),
}

impl AxiomSystem {
    fn build(name: &str, signature: Signature, schemas: &[AxiomName], rules: &[Rule]) -> Self {
        AxiomSystem {
            name: name.to_string(),
            schemas: schemas.iter().copied().collect(),
            rules: rules.iter().copied().collect(),
            signature,
        }
    }

    /// Base names accepted by [`AxiomSystem::named`].
    pub const BASE_NAMES: [&'static str; 7] = [
        "AX_KXAforall",
        "AX_XAforall",
        "AXe_XAforall",
        "AXe_KXAAstarforall",
        "AXe_KXAAstarforall_noNKA",
        "AXe_KAstarforall",
        "AXe_KAstar",
    ];

    /// A system by name: a base name followed by `+`-separated extensions,
    /// each a bundle (`T45`, `TX4X5X`, `T45star`) or a single axiom name.
    ///
    /// `AXe_KXAAstarforall` keeps NKA as listed in its definition; NKA is
    /// not weakly valid once languages vary between worlds, and
    /// `AXe_KXAAstarforall_noNKA` drops it.
    pub fn named(full: &str) -> Result<Self, SystemError> {
        use AxiomName::*;
        use Rule::*;
        let mut parts = full.split('+');
        let base = parts.next().unwrap_or_default();
        let kxa = [Prop, Agpp, Ka, Nka, K, A0, OneForall, KForall, NForall, Barcan];
        let xa = [Prop, Agpp, Xa, FaX, KX, A0X, OneForall, KForall, NForall, BarcanX];
        let mut sys = match base {
            "AX_KXAforall" => Self::build(base, Signature::KXA, &kxa, &[Mp, GenK, GenForall]),
            "AX_XAforall" => Self::build(base, Signature::XA, &xa, &[Mp, GenX, GenForall]),
            "AXe_XAforall" => {
                let mut s = Self::build(base, Signature::XA, &xa, &[Mp, GenX, GenForall]);
                s.replace(FaX, FaStarX);
                s.replace(BarcanX, BarcanStarX);
                s
            }
            "AXe_KXAAstarforall" | "AXe_KXAAstarforall_noNKA" => {
                let mut s = Self::build(base, Signature::KXA, &kxa, &[Mp, GenStar, GenForall]);
                s.replace(Barcan, BarcanStar);
                s.schemas.extend([AgppStar, A0Star, FaStar]);
                if base.ends_with("_noNKA") {
                    s.schemas.remove(&Nka);
                }
                s
            }
            "AXe_KAstarforall" => {
                let mut s = Self::named("AXe_KXAAstarforall")?;
                for a in [Agpp, Ka, Nka, A0] {
                    s.schemas.remove(&a);
                }
                s.name = base.to_string();
                s.signature = Signature::K;
                s
            }
            // Includes MP, which every Hilbert system here needs.
            "AXe_KAstar" => Self::build(base, Signature::K_QF, &[Prop, AgppStar, K, A0Star], &[Mp, GenStar]),
            _ => return Err(SystemError::UnknownSystem(full.to_string())),
        };
        for ext in parts {
            let add: &[AxiomName] = match ext {
                "T45" => &[T, Four, Five],
                "TX4X5X" => &[TX, FourX, FiveX],
                "T45star" => &[T, Four, FiveStar],
                other => match other.parse::<AxiomName>() {
                    Ok(a) => {
                        sys.schemas.insert(a);
                        continue;
                    }
                    Err(_) => return Err(SystemError::UnknownExtension(other.to_string())),
                },
            };
            sys.schemas.extend(add.iter().copied());
        }
        sys.name = full.to_string();
        Ok(sys)
    }

    fn replace(&mut self, old: AxiomName, new: AxiomName) {
        self.schemas.remove(&old);
        self.schemas.insert(new);
    }

    pub fn has_axiom(&self, a: AxiomName) -> bool {
        self.schemas.contains(&a)
    }

    pub fn has_rule(&self, r: Rule) -> bool {
        self.rules.contains(&r)
    }

    /// Quantifier domain for sweeps: the sentences of the system's language.
    pub fn domain(&self) -> QuantifierDomain {
        self.signature.domain()
    }
}

impl FromStr for AxiomSystem {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomSystem::named(s)
    }
}

impl fmt::Display for AxiomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn names(s: &AxiomSystem) -> Vec<&'static str> {
        s.schemas.iter().map(|a| a.as_str()).collect()
    }

    #[test]
    fn definitions() {
        let kxa = AxiomSystem::named("AX_KXAforall").unwrap();
        assert_eq!(
            names(&kxa),
            ["Prop", "AGPP", "KA", "NKA", "K", "A0", "1_forall", "K_forall", "N_forall", "Barcan"]
        );
        assert_eq!(kxa.rules.iter().copied().collect::<Vec<_>>(), [Rule::Mp, Rule::GenK, Rule::GenForall]);

        let xa_e = AxiomSystem::named("AXe_XAforall").unwrap();
        assert_eq!(
            names(&xa_e),
            ["Prop", "AGPP", "1_forall", "K_forall", "N_forall", "K_X", "XA", "A0_X", "Barcan*_X", "FA*_X"]
        );
        assert_eq!(xa_e.rules.iter().copied().collect::<Vec<_>>(), [Rule::Mp, Rule::GenX, Rule::GenForall]);
        assert!(AxiomSystem::named("AX_XAforall").unwrap().has_axiom(AxiomName::FaX));

        let kxa_e = AxiomSystem::named("AXe_KXAAstarforall").unwrap();
        assert_eq!(
            names(&kxa_e),
            [
                "Prop", "AGPP", "KA", "NKA", "K", "A0", "1_forall", "K_forall", "N_forall", "AGPP*", "A0*", "Barcan*",
                "FA*"
            ]
        );
        assert_eq!(kxa_e.rules.iter().copied().collect::<Vec<_>>(), [Rule::Mp, Rule::GenStar, Rule::GenForall]);
        assert!(!AxiomSystem::named("AXe_KXAAstarforall_noNKA").unwrap().has_axiom(AxiomName::Nka));

        let k_e = AxiomSystem::named("AXe_KAstarforall").unwrap();
        assert_eq!(names(&k_e), ["Prop", "K", "1_forall", "K_forall", "N_forall", "AGPP*", "A0*", "Barcan*", "FA*"]);
        assert_eq!(k_e.signature, Signature::K);

        let k_qf = AxiomSystem::named("AXe_KAstar").unwrap();
        assert_eq!(names(&k_qf), ["Prop", "K", "AGPP*", "A0*"]);
        assert_eq!(k_qf.rules.iter().copied().collect::<Vec<_>>(), [Rule::Mp, Rule::GenStar]);
    }

    #[test]
    fn extensions() {
        let s = AxiomSystem::named("AXe_XAforall+TX4X5X").unwrap();
        assert!(s.has_axiom(AxiomName::TX) && s.has_axiom(AxiomName::FourX) && s.has_axiom(AxiomName::FiveX));
        assert_eq!(s.name, "AXe_XAforall+TX4X5X");
        let s = AxiomSystem::named("AXe_KAstar+T45star").unwrap();
        assert!(s.has_axiom(AxiomName::FiveStar) && !s.has_axiom(AxiomName::Five));
        let s = AxiomSystem::named("AXe_XAforall+T_X+4_X").unwrap();
        assert!(s.has_axiom(AxiomName::FourX) && !s.has_axiom(AxiomName::FiveX));
        assert!(matches!(AxiomSystem::named("AXe_XAforall+T9"), Err(SystemError::UnknownExtension(_))));
        assert!(matches!(AxiomSystem::named("AX"), Err(SystemError::UnknownSystem(_))));
        for b in AxiomSystem::BASE_NAMES {
            assert!(AxiomSystem::named(b).is_ok());
        }
    }

    #[test]
    fn rule_names() {
        for r in Rule::ALL {
            assert_eq!(r.as_str().parse::<Rule>().unwrap(), r);
        }
        assert_eq!("Gen_∀".parse::<Rule>().unwrap(), Rule::GenForall);
    }
}
