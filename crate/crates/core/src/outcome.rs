//! Finite outcome space of `n` random variables taking values in {+1, -1}.
//!
//! Atoms are encoded as integers in `0..2^n`, bit `i` set exactly when
//! variable `i` is +1. Events are dense bitsets over that encoding, and a
//! [`MomentTerm`] is a bitmask of variables whose product is evaluated on
//! atoms.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest number of variables a [`VariableSystem`] may hold.
pub const MAX_VARIABLES: usize = 16;

/// Ordered, uniquely named ±1 variables. The order fixes the atom encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSystem {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VariableSystem {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Domain("a variable system needs at least one variable".into()));
        }
        if names.len() > MAX_VARIABLES {
            return Err(Error::Oversize(format!(
                "{} variables requested, at most {MAX_VARIABLES} supported",
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        let mut owned = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref().trim();
            if name.is_empty() {
                return Err(Error::Domain("variable names must be non-empty".into()));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::Domain(format!("duplicate variable name {name:?}")));
            }
            owned.push(name.to_string());
        }
        Ok(Self { names: owned, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn atom_count(&self) -> usize {
        1usize << self.names.len()
    }

    /// Every atom in encoding order.
    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        let n = self.len() as u8;
        (0..self.atom_count() as u32).map(move |bits| Atom { bits, n })
    }

    pub fn atom(&self, bits: u32) -> Result<Atom> {
        if (bits as usize) >= self.atom_count() {
            return Err(Error::Domain(format!("atom index {bits} out of range")));
        }
        Ok(Atom { bits, n: self.len() as u8 })
    }

    /// Atom with the given sign pattern, one entry per variable in order.
    pub fn atom_from_signs(&self, signs: &[i8]) -> Result<Atom> {
        if signs.len() != self.len() {
            return Err(Error::Domain(format!(
                "expected {} signs, got {}",
                self.len(),
                signs.len()
            )));
        }
        let mut bits = 0u32;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => bits |= 1 << i,
                -1 => {}
                other => return Err(Error::Domain(format!("sign {other} is not ±1"))),
            }
        }
        Ok(Atom { bits, n: self.len() as u8 })
    }

    /// Parses a `+`/`-` string (one character per variable; U+2212 accepted).
    pub fn parse_atom(&self, text: &str) -> Result<Atom> {
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(Error::Parse(format!("bad sign {other:?} in atom {text:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        self.atom_from_signs(&signs)
    }

    pub fn term<S: AsRef<str>>(&self, names: &[S]) -> Result<MomentTerm> {
        if names.is_empty() {
            return Err(Error::Domain("a moment term needs at least one variable".into()));
        }
        let mut mask = 0u32;
        for name in names {
            let name = name.as_ref().trim();
            let i = self
                .position(name)
                .ok_or_else(|| Error::Domain(format!("unknown variable {name:?}")))?;
            if mask & (1 << i) != 0 {
                return Err(Error::Domain(format!("variable {name:?} repeated in term")));
            }
            mask |= 1 << i;
        }
        Ok(MomentTerm { mask })
    }

    /// Single-variable term for the variable at `position`.
    pub fn variable_term(&self, position: usize) -> Result<MomentTerm> {
        if position >= self.len() {
            return Err(Error::Domain(format!("variable position {position} out of range")));
        }
        Ok(MomentTerm { mask: 1 << position })
    }

    pub fn check_term(&self, term: &MomentTerm) -> Result<()> {
        if term.mask == 0 || (term.mask >> self.len()) != 0 {
            return Err(Error::Domain(format!(
                "term {term:?} does not belong to a {}-variable system",
                self.len()
            )));
        }
        Ok(())
    }

    /// Names joined with `*`, e.g. `X1*Y2*Y3`.
    pub fn term_label(&self, term: &MomentTerm) -> String {
        term.positions()
            .map(|i| self.names.get(i).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn term_names(&self, term: &MomentTerm) -> Vec<String> {
        term.positions()
            .filter_map(|i| self.names.get(i).cloned())
            .collect()
    }

    pub fn empty_event(&self) -> Event {
        Event::empty(self.atom_count())
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.atom_count())
    }

    /// The event `{v = sign}` for the variable at `position`.
    pub fn variable_event(&self, position: usize, sign: i8) -> Result<Event> {
        let term = self.variable_term(position)?;
        term_event(self, &term, sign)
    }
}

/// All atoms of a system in encoding order.
pub fn atoms_of(system: &VariableSystem) -> Vec<Atom> {
    system.atoms().collect()
}

/// A complete ±1 assignment to the variables of a system.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    bits: u32,
    n: u8,
}

impl Atom {
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn num_variables(&self) -> usize {
        self.n as usize
    }

    pub fn sign(&self, position: usize) -> i8 {
        if self.bits & (1 << position) != 0 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.num_variables()).map(|i| self.sign(i)).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.num_variables() {
            f.write_str(if self.sign(i) > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({self})")
    }
}

/// Product of a non-empty set of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentTerm {
    mask: u32,
}

impl MomentTerm {
    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask == 0 {
            return Err(Error::Domain("a moment term needs at least one variable".into()));
        }
        Ok(Self { mask })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn degree(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |i| self.mask & (1 << i) != 0)
    }

    /// Sign of the product without domain checking; callers guarantee fit.
    pub(crate) fn eval_bits(&self, atom_bits: u32) -> i8 {
        // -1 factors sit where the term has a bit and the atom does not.
        if (self.mask & !atom_bits).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Sign of the product of the atom's values over the term's variables.
pub fn eval_term(term: &MomentTerm, atom: &Atom) -> Result<i8> {
    if term.mask == 0 || (term.mask >> atom.n) != 0 {
        return Err(Error::Domain(format!(
            "term {term:?} uses variables outside a {}-variable atom",
            atom.n
        )));
    }
    Ok(term.eval_bits(atom.bits))
}

/// All atoms where the term evaluates to `sign`.
pub fn term_event(system: &VariableSystem, term: &MomentTerm, sign: i8) -> Result<Event> {
    system.check_term(term)?;
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign {sign} is not ±1")));
    }
    let mut event = system.empty_event();
    for bits in 0..system.atom_count() as u32 {
        if term.eval_bits(bits) == sign {
            event.insert(bits as usize);
        }
    }
    Ok(event)
}

/// Set of atoms over a fixed atom space, stored as a dense bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    size: usize,
    words: Vec<u64>,
}

impl Event {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut e = Self::empty(size);
        for w in &mut e.words {
            *w = u64::MAX;
        }
        e.trim();
        e
    }

    pub fn singleton(size: usize, atom: usize) -> Self {
        let mut e = Self::empty(size);
        e.insert(atom);
        e
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(size: usize, atoms: I) -> Self {
        let mut e = Self::empty(size);
        for a in atoms {
            e.insert(a);
        }
        e
    }

    fn trim(&mut self) {
        let rem = self.size % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of atoms in the underlying space.
    pub fn space_size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, atom: usize) {
        assert!(atom < self.size, "atom {atom} outside space of {}", self.size);
        self.words[atom / 64] |= 1 << (atom % 64);
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom < self.size && self.words[atom / 64] & (1 << (atom % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.size
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    fn same_space(&self, other: &Event) {
        assert_eq!(self.size, other.size, "events over different atom spaces");
    }

    pub fn complement(&self) -> Event {
        let mut out = Event {
            size: self.size,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    pub fn union(&self, other: &Event) -> Event {
        self.same_space(other);
        Event {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        self.same_space(other);
        Event {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.same_space(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.same_space(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
