//! Words over α, β, γ, δ: evaluation, transport of gaps to the central
//! gap, decomposition of arbitrary elements, and the abelianization.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circle::Angle;
use crate::element::{Element, Generator};
use crate::forest::{Forest, Tree};
use crate::lamination::{ancestors, central_label, gap_color, GapId};
use crate::thompson_t::{boundary_action, factor_t, t_transporter, tau_inv, TGen, TLetter, TreePair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected character {0:?} in word")]
    BadLetter(char),
    #[error("dangling inverse mark")]
    DanglingInverse,
}

pub type WordResult<T> = Result<T, WordError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Generator, inverse: bool) -> Letter {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Letter {
        Letter::new(self.gen, !self.inverse)
    }

    pub fn element(self) -> Element {
        let e = Element::generator(self.gen);
        if self.inverse {
            e.inverse()
        } else {
            e
        }
    }
}

impl From<TLetter> for Letter {
    fn from(l: TLetter) -> Letter {
        let gen = match l.gen {
            TGen::B => Generator::Beta,
            TGen::G => Generator::Gamma,
            TGen::D => Generator::Delta,
        };
        Letter::new(gen, l.inverse)
    }
}

/// A word; the leftmost letter is applied last.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(gen: Generator) -> Word {
        Word(vec![Letter::new(gen, false)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Exponent sum of α.
    pub fn alpha_exponent(&self) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == Generator::Alpha)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }

    fn from_t(word: &[TLetter]) -> Word {
        Word(word.iter().map(|&l| Letter::from(l)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", l.gen.letter(), if l.inverse { "'" } else { "" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> WordResult<Word> {
        let mut letters: Vec<Letter> = Vec::new();
        for c in s.chars() {
            if c.is_whitespace() {
                continue;
            }
            if c == '\'' {
                let last = letters.last_mut().ok_or(WordError::DanglingInverse)?;
                if last.inverse {
                    return Err(WordError::DanglingInverse);
                }
                last.inverse = true;
                continue;
            }
            let gen = Generator::from_letter(c).ok_or(WordError::BadLetter(c))?;
            letters.push(Letter::new(gen, false));
        }
        Ok(Word(letters))
    }
}

/// Reduced product of the word's letters.
pub fn eval_word(w: &Word) -> Element {
    let gens: Vec<Element> = Generator::ALL.iter().map(|&g| Element::generator(g)).collect();
    let invs: Vec<Element> = gens.iter().map(Element::inverse).collect();
    w.0.iter().fold(Element::identity(), |acc, l| {
        let i = Generator::ALL
            .iter()
            .position(|&g| g == l.gen)
            .expect("known generator");
        acc.compose(if l.inverse { &invs[i] } else { &gens[i] })
    })
}

/// A word in β, γ, δ evaluating to `tau_inv(t)`.
fn rist_word(t: &TreePair) -> Word {
    Word::from_t(&factor_t(t))
}

/// A word whose value maps `gap` onto the central gap.
pub fn transport_gap_to_center(gap: &GapId) -> Word {
    let mut word = Word::empty();
    let mut current = gap.clone();
    let half = Angle::frac(1, 2);
    let alpha = Element::generator(Generator::Alpha);
    while let GapId::Behind(arc) = &current {
        let outer = ancestors(arc).into_iter().next().unwrap_or_else(|| arc.clone());
        let label = central_label(&outer).expect("outermost arc is central");
        let t = t_transporter(&label, &half).expect("labels are dyadic");
        let f = tau_inv(&t);
        let step = alpha.compose(&f);
        let next = step.image_of_gap(&current).expect("elements preserve the lamination");
        // prepend: the new step is applied after everything so far
        word = Word::letter(Generator::Alpha).concat(&rist_word(&t)).concat(&word);
        current = next;
    }
    word.free_reduce()
}

/// Positions of the regions behind central arcs: tree 1, tree 3, or the
/// middle child of an outer-only node in tree 0 or 2.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SectionPos {
    tree: usize,
    path: Vec<usize>,
}

fn collect_sections(t: &Tree, tree: usize, path: &mut Vec<usize>, out: &mut Vec<SectionPos>) {
    if t.is_leaf() {
        return;
    }
    path.push(1);
    out.push(SectionPos {
        tree,
        path: path.clone(),
    });
    path.pop();
    for c in [0, 2] {
        path.push(c);
        collect_sections(&t.children()[c], tree, path, out);
        path.pop();
    }
}

fn sections(forest: &Forest) -> Vec<SectionPos> {
    let t = forest.trees();
    let mut out = vec![
        SectionPos { tree: 1, path: vec![] },
        SectionPos { tree: 3, path: vec![] },
    ];
    collect_sections(&t[0], 0, &mut Vec::new(), &mut out);
    collect_sections(&t[2], 2, &mut Vec::new(), &mut out);
    out
}

fn section_tree<'a>(forest: &'a Forest, pos: &SectionPos) -> &'a Tree {
    forest.trees()[pos.tree].subtree(&pos.path)
}

fn set_section(forest: &Forest, pos: &SectionPos, sub: Tree) -> Forest {
    let mut trees = forest.trees().to_vec();
    trees[pos.tree] = trees[pos.tree].replace_at(&pos.path, sub);
    Forest::new(forest.arity(), trees)
}

fn skeleton(forest: &Forest, secs: &[SectionPos]) -> Forest {
    secs.iter()
        .fold(forest.clone(), |f, pos| set_section(&f, pos, Tree::Leaf))
}

/// Trace of one decomposition: the arc count at each recursive call.
#[derive(Debug, Clone, Default)]
pub struct DecomposeTrace {
    pub measures: Vec<(usize, usize)>,
}

fn decompose_stab(f: &Element, trace: &mut DecomposeTrace) -> Word {
    let f = f.reduce();
    let n = f.arc_count();
    if f.is_identity() {
        return Word::empty();
    }
    let t = boundary_action(&f).expect("element fixes the central gap");
    let g = tau_inv(&t);
    let wg = rist_word(&t);
    let h = g.inverse().compose(&f);
    assert!(h.arc_count() <= n, "removing the central action cannot add arcs");
    if h.is_identity() {
        return wg;
    }
    let p = h.pair();
    let secs = sections(&p.domain);
    let skel = skeleton(&p.domain, &secs);
    assert_eq!(
        skel,
        skeleton(&p.range, &sections(&p.range)),
        "h fixes every central arc"
    );
    assert_eq!(p.offset, 0, "h fixes the central-adjacent leaves");
    let busy: Vec<&SectionPos> = secs
        .iter()
        .filter(|pos| !section_tree(&p.domain, pos).is_leaf() || !section_tree(&p.range, pos).is_leaf())
        .collect();
    if busy.len() > 1 {
        let mut word = wg;
        for pos in busy {
            let domain = set_section(&skel, pos, section_tree(&p.domain, pos).clone());
            let range = set_section(&skel, pos, section_tree(&p.range, pos).clone());
            let hi = Element::make(
                crate::diagram::ArcDiagram::from_forest(domain).expect("diagram"),
                crate::diagram::ArcDiagram::from_forest(range).expect("diagram"),
                0,
            )
            .expect("a single section of h is a valid element")
            .reduce();
            trace.measures.push((h.arc_count(), hi.arc_count()));
            assert!(hi.arc_count() < h.arc_count(), "each section has fewer arcs");
            word = word.concat(&decompose_stab(&hi, trace));
        }
        return word;
    }
    let pos = busy[0];
    // rotate the central cut set so the busy section sits behind {1/6,5/6}
    let arc = section_arc(pos);
    let label = central_label(&arc).expect("sections sit behind central arcs");
    let rot = rotation_to_zero(&h, &label);
    let c = tau_inv(&rot);
    let wc = rist_word(&rot);
    let k = c.compose(&h).compose(&c.inverse());
    assert!(
        k.arc_count() <= h.arc_count(),
        "conjugating by the rotation does not expand"
    );
    let alpha = Element::generator(Generator::Alpha);
    let k2 = alpha.inverse().compose(&k).compose(&alpha);
    trace.measures.push((n, k2.arc_count()));
    assert!(k2.arc_count() < n, "conjugating by alpha cancels an arc");
    assert!(k2.is_in_stab_c(), "the reduced element fixes the central gap");
    let inner = decompose_stab(&k2, trace);
    wg.concat(&wc.inverse())
        .concat(&Word::letter(Generator::Alpha))
        .concat(&inner)
        .concat(&Word::letter(Generator::Alpha).inverse())
        .concat(&wc)
}

/// Central arc bounding a section.
fn section_arc(pos: &SectionPos) -> crate::lamination::Arc {
    use crate::lamination::{Arc, Child, StandardInterval};
    match pos.tree {
        1 => Arc::upper_base(),
        3 => Arc::lower_base(),
        t => {
            let parent = &pos.path[..pos.path.len() - 1];
            parent
                .iter()
                .fold(StandardInterval::base(t), |i, &c| i.child(Child::ALL[c]))
                .primary_arc()
        }
    }
}

/// The cyclic rotation of the central cut set of `h` carrying `label` to 0.
fn rotation_to_zero(h: &Element, label: &Angle) -> TreePair {
    let p = h.pair();
    let trees = p.domain.trees();
    let s = Forest::new(2, vec![strip_to_binary(&trees[0]), strip_to_binary(&trees[2])]);
    let cuts = crate::thompson_t::cut_points(&s);
    let i = cuts
        .iter()
        .position(|c| c == label)
        .expect("label is a cut of the skeleton");
    let n = cuts.len() as i64;
    TreePair::new(s.clone(), s, (n - i as i64) % n).expect("same forest on both sides")
}

fn strip_to_binary(t: &Tree) -> Tree {
    match t {
        Tree::Leaf => Tree::Leaf,
        Tree::Node(_) => {
            let c = t.children();
            Tree::node(vec![strip_to_binary(&c[0]), strip_to_binary(&c[2])])
        }
    }
}

/// Writes `f` as a word in α, β, γ, δ.
pub fn decompose(f: &Element) -> Word {
    decompose_traced(f, &mut DecomposeTrace::default())
}

/// [`decompose`], recording the arc counts of every recursive step.
pub fn decompose_traced(f: &Element, trace: &mut DecomposeTrace) -> Word {
    let f = f.reduce();
    let gap = f
        .image_of_gap(&GapId::Central)
        .expect("elements preserve the lamination");
    let w1 = transport_gap_to_center(&gap);
    let f1 = eval_word(&w1).compose(&f);
    debug_assert!(f1.is_in_stab_c());
    w1.inverse().concat(&decompose_stab(&f1, trace)).free_reduce()
}

/// 0 when `f` preserves the two-coloring of the gaps, 1 otherwise.
pub fn abelianize(f: &Element) -> u8 {
    gap_color(
        &f.image_of_gap(&GapId::Central)
            .expect("elements preserve the lamination"),
    )
}

pub fn is_in_commutator(f: &Element) -> bool {
    abelianize(f) == 0
}

/// A uniformly random word over the eight letters.
pub fn random_word(seed: u64, length: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Word(
        (0..length)
            .map(|_| {
                let k: usize = rng.gen_range(0..8);
                Letter::new(Generator::ALL[k / 2], k % 2 == 1)
            })
            .collect(),
    )
}

pub fn random_element(seed: u64, length: usize) -> Element {
    eval_word(&random_word(seed, length))
}
