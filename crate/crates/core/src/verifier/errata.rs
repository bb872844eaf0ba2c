//! Print-level corrections. Records keep the printed text; each entry here
//! names the fragment that fails exact comparison and the reading that passes.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErratumKind {
    /// Fragment of a record's right side.
    Text,
    /// Definition of a named atom; `printed` and `corrected` are its products.
    Atom(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct Erratum {
    pub id: &'static str,
    /// Record ids the entry applies to; a trailing `*` matches a prefix.
    pub records: &'static [&'static str],
    pub kind: ErratumKind,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        id: "atom-V10",
        records: &["appendix.m10.*", "certification.threehalf"],
        kind: ErratumKind::Atom("V10"),
        printed: "J(5,11)^2*J(11)^5/(J(2,11)^2*J(3,11))",
        corrected: "J(5,11)*J(11)^5/(J(2,11)^2*J(3,11))",
        note: "V10 with J(5,11)^2 makes every f_10(b) right side non-integral at q^5; the quotient of f_10(1) by its (T,t) polynomial has product exponents of J(5,11)^1",
    },
    Erratum {
        id: "lemma3-s2-a4",
        records: &["lemma3.s2.a4"],
        kind: ErratumKind::Text,
        printed: "X(11,121) + X(22,121)",
        corrected: "X(11,121) - X(22,121)",
        note: "the a=4, j=2 display uses X(1)+X(2) in its last two terms; the j=1 display for a=4 and the exact check both give X(1)-X(2)",
    },
    Erratum {
        id: "lemma3-s0s8-sign",
        records: &["lemma3.proof.s2.a1.m0m8"],
        kind: ErratumKind::Text,
        printed: "+ ((q^33*J(11,121)",
        corrected: "- ((q^33*J(11,121)",
        note: "the q^33 term of S_0(1,11,1,2)+S_8(1,11,1,2) carries the sign it has in the a=1, j=2 display",
    },
    Erratum {
        id: "mathcalF1-J55",
        records: &["certification.mathcalF1"],
        kind: ErratumKind::Text,
        printed: "(2*J(11,121)^2*J(55,121)^2)",
        corrected: "(2*J(11,121)^2*J(55,121))",
        note: "the q^11 term of the F(1) expansion has J(55,121)^2 in the denominator; the a=0, j=2 display and h_{3/2}(1) have J(55,121)",
    },
];

pub(crate) fn applies(e: &Erratum, id: &str) -> bool {
    e.records.iter().any(|p| match p.strip_suffix('*') {
        Some(prefix) => id.starts_with(prefix),
        None => id == *p,
    })
}

/// Replaces the whole word `name` (not followed by a digit) in `s`.
pub(crate) fn replace_atom(s: &str, name: &str, with: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find(name) {
        let after = &rest[i + name.len()..];
        out.push_str(&rest[..i]);
        if after.starts_with(|c: char| c.is_ascii_digit()) {
            out.push_str(name);
        } else {
            out.push_str(with);
        }
        rest = after;
    }
    out.push_str(rest);
    out
}
