//! Executable form of the cut–cocut algebra (items A1–E7).

use serde::Serialize;

use super::subset::Subset;
use super::system::SetSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub checks: Vec<AlgebraCheck>,
    /// Whether `𝒢(overline Ω) = overline 𝒞(Ω)` holds with equality.
    pub e7_cocut_equality: bool,
    /// Whether `𝒞(overline Ω) = overline 𝒢(Ω)` holds with equality.
    pub e7_cut_equality: bool,
}

impl AlgebraReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AlgebraCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn iff(a: bool, b: bool) -> bool {
    a == b
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

/// Evaluates every item of the algebra on `s`. Order statements are checked on
/// the pairs `(s, other)`, `(s ∩ other, s)` and `(s, s ∪ other)`, so both the
/// comparable and the incomparable case are exercised.
///
/// # Panics
/// If `other` lives on a different ground set.
pub fn algebra_audit(s: &SetSystem, other: &SetSystem) -> AlgebraReport {
    assert_eq!(s.ground(), other.ground(), "companion must share the ground set");
    let ground = s.ground();
    let empty = SetSystem::empty(ground).expect("ground already validated");
    let power = SetSystem::power_set(ground).expect("ground already validated");
    let pairs = [
        (s.clone(), other.clone()),
        (s.intersection(other).unwrap(), s.clone()),
        (s.clone(), s.union(other).unwrap()),
    ];

    let comp = s.complement();
    let hat = s.element_complement();
    let cut = s.cut();
    let cocut = s.cocut();
    let upper = s.is_upper();
    let lower = s.is_lower();

    let mut checks = Vec::with_capacity(27);
    let mut push = |id, statement, passed| checks.push(AlgebraCheck { id, statement, passed });

    push(
        "A1",
        "overline ∅ = 𝒫(Δ) and overline 𝒫(Δ) = ∅",
        empty.complement() == power && power.complement() == empty,
    );
    push(
        "A3",
        "Ω ⊆ Ω' iff overline Ω ⊇ overline Ω'",
        pairs
            .iter()
            .all(|(a, b)| iff(a.is_subset_of(b), b.complement().is_subset_of(&a.complement()))),
    );
    push(
        "A4",
        "upper Ω gives lower overline Ω, and vice versa",
        implies(upper, comp.is_lower()) && implies(lower, comp.is_upper()),
    );
    push("A5", "overline overline Ω = Ω", comp.complement() == *s);

    push(
        "B1",
        "hat ∅ = ∅ and hat 𝒫(Δ) = 𝒫(Δ)",
        empty.element_complement() == empty && power.element_complement() == power,
    );
    push(
        "B2",
        "Ω ⊆ Ω' iff hat Ω ⊆ hat Ω'",
        pairs.iter().all(|(a, b)| {
            iff(
                a.is_subset_of(b),
                a.element_complement().is_subset_of(&b.element_complement()),
            )
        }),
    );
    push(
        "B4",
        "upper Ω gives lower hat Ω, and vice versa",
        implies(upper, hat.is_lower()) && implies(lower, hat.is_upper()),
    );
    push("B5", "hat hat Ω = Ω", hat.element_complement() == *s);

    push(
        "C1",
        "𝒞(∅) = 𝒫(Δ) and 𝒞(𝒫(Δ)) = ∅",
        empty.cut() == power && power.cut() == empty,
    );
    push(
        "C2",
        "𝒞(Ω) = ∅ iff ∅ ∈ Ω",
        iff(cut.is_empty(), s.contains(Subset::EMPTY)),
    );
    push("C3", "𝒞(Ω) is upper", cut.is_upper());
    push("C4", "𝒞(Ω) = 𝒞(m(Ω))", cut == s.minimal().cut());
    push(
        "C5",
        "Ω ⊆ Ω' implies 𝒞(Ω) ⊇ 𝒞(Ω')",
        pairs
            .iter()
            .all(|(a, b)| implies(a.is_subset_of(b), b.cut().is_subset_of(&a.cut()))),
    );
    push("C6", "𝒞(𝒞(Ω)) = ↑Ω", cut.cut() == s.up_closure());

    push(
        "D1",
        "𝒢(∅) = 𝒫(Δ) and 𝒢(𝒫(Δ)) = ∅",
        empty.cocut() == power && power.cocut() == empty,
    );
    push(
        "D2",
        "𝒢(Ω) = ∅ iff Δ ∈ Ω",
        iff(cocut.is_empty(), s.contains(ground.full())),
    );
    push("D3", "𝒢(Ω) is lower", cocut.is_lower());
    push("D4", "𝒢(Ω) = 𝒢(M(Ω))", cocut == s.maximal().cocut());
    push(
        "D5",
        "Ω ⊆ Ω' implies 𝒢(Ω) ⊇ 𝒢(Ω')",
        pairs
            .iter()
            .all(|(a, b)| implies(a.is_subset_of(b), b.cocut().is_subset_of(&a.cocut()))),
    );
    push("D6", "𝒢(𝒢(Ω)) = ↓Ω", cocut.cocut() == s.down_closure());

    push(
        "E1",
        "hat overline Ω = overline hat Ω",
        comp.element_complement() == hat.complement(),
    );
    push(
        "E2",
        "↑hat Ω = hat ↓Ω and ↓hat Ω = hat ↑Ω",
        hat.up_closure() == s.down_closure().element_complement()
            && hat.down_closure() == s.up_closure().element_complement(),
    );
    push(
        "E3",
        "hat M(Ω) = m(hat Ω) and hat m(Ω) = M(hat Ω)",
        s.maximal().element_complement() == hat.minimal() && s.minimal().element_complement() == hat.maximal(),
    );
    push(
        "E4",
        "𝒞(hat Ω) = hat 𝒢(Ω) and 𝒢(hat Ω) = hat 𝒞(Ω)",
        hat.cut() == cocut.element_complement() && hat.cocut() == cut.element_complement(),
    );
    push(
        "E5",
        "overline ↑Ω ⊆ ↓overline Ω and overline ↓Ω ⊆ ↑overline Ω",
        s.up_closure().complement().is_subset_of(&comp.down_closure())
            && s.down_closure().complement().is_subset_of(&comp.up_closure()),
    );
    push(
        "E6",
        "m(overline Ω) ⊆ overline M(Ω) and M(overline Ω) ⊆ overline m(Ω)",
        comp.minimal().is_subset_of(&s.maximal().complement())
            && comp.maximal().is_subset_of(&s.minimal().complement()),
    );

    let g_comp = comp.cocut();
    let c_comp = comp.cut();
    let not_cut = cut.complement();
    let not_cocut = cocut.complement();
    let e7_cocut_equality = g_comp == not_cut;
    let e7_cut_equality = c_comp == not_cocut;
    push(
        "E7",
        "𝒢(overline Ω) ⊆ overline 𝒞(Ω) and 𝒞(overline Ω) ⊆ overline 𝒢(Ω), with equality iff Ω is upper, respectively lower",
        g_comp.is_subset_of(&not_cut)
            && c_comp.is_subset_of(&not_cocut)
            && iff(e7_cocut_equality, upper)
            && iff(e7_cut_equality, lower),
    );

    AlgebraReport {
        checks,
        e7_cocut_equality,
        e7_cut_equality,
    }
}
