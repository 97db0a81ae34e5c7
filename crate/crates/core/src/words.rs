use crate::error::{Error, Result};

/// Freely reduced word in a free group of known rank.
/// Letters are nonzero signed generator indices: `3` = x3, `-3` = x3^-1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

fn reduce_into(buf: &mut Vec<i32>, letters: impl IntoIterator<Item = i32>) {
    for l in letters {
        if buf.last().is_some_and(|&p| p == -l) {
            buf.pop();
        } else {
            buf.push(l);
        }
    }
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn new(rank: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > rank {
                return Err(Error::BadGenerator { index: idx, rank });
            }
        }
        let mut buf = Vec::with_capacity(letters.len());
        reduce_into(&mut buf, letters);
        Ok(Word { rank, letters: buf })
    }

    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::BadGenerator { index: i, rank });
        }
        Ok(Word { rank, letters: vec![i as i32] })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of letter signs per generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut e = vec![0i64; self.rank];
        for &l in &self.letters {
            e[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        e
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut buf = self.letters.clone();
        reduce_into(&mut buf, other.letters.iter().copied());
        Ok(Word { rank: self.rank, letters: buf })
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..k.unsigned_abs() {
            reduce_into(&mut buf, base.letters.iter().copied());
        }
        Word { rank: self.rank, letters: buf }
    }
}

/// [w1, w2] = w1 w2 w1^-1 w2^-1.
pub fn commutator(w1: &Word, w2: &Word) -> Result<Word> {
    w1.mul(w2)?.mul(&w1.inverse())?.mul(&w2.inverse())
}

#[derive(Debug, PartialEq)]
enum Tok {
    Name(String, usize),
    Int(i64, usize),
    Caret(usize),
    LParen(usize),
    RParen(usize),
    LBrack(usize),
    RBrack(usize),
    Comma(usize),
}

impl Tok {
    fn pos(&self) -> usize {
        match *self {
            Tok::Name(_, p)
            | Tok::Int(_, p)
            | Tok::Caret(p)
            | Tok::LParen(p)
            | Tok::RParen(p)
            | Tok::LBrack(p)
            | Tok::RBrack(p)
            | Tok::Comma(p) => p,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                toks.push(Tok::LParen(i));
                i += 1;
            }
            b')' => {
                toks.push(Tok::RParen(i));
                i += 1;
            }
            b'[' => {
                toks.push(Tok::LBrack(i));
                i += 1;
            }
            b']' => {
                toks.push(Tok::RBrack(i));
                i += 1;
            }
            b',' => {
                toks.push(Tok::Comma(i));
                i += 1;
            }
            b'^' => {
                toks.push(Tok::Caret(i));
                i += 1;
            }
            b'+' | b'-' | b'0'..=b'9' => {
                let start = i;
                if b == b'+' || b == b'-' {
                    i += 1;
                }
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits {
                    return Err(Error::Parse { pos: start, msg: "expected digits".into() });
                }
                let v: i64 = text[start..i]
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })?;
                toks.push(Tok::Int(v, start));
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push(Tok::Name(text[start..i].to_string(), start));
            }
            _ => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character `{}`", b as char) })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    at: usize,
    gens: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn rank(&self) -> usize {
        self.gens.len()
    }

    // product of factors; stops at `)`, `]`, `,` or end of input
    fn product(&mut self) -> Result<Word> {
        let mut w = Word::empty(self.rank());
        loop {
            match self.peek() {
                None | Some(Tok::RParen(_)) | Some(Tok::RBrack(_)) | Some(Tok::Comma(_)) => {
                    return Ok(w)
                }
                _ => {
                    let f = self.factor()?;
                    w = w.mul(&f)?;
                }
            }
        }
    }

    // atom with optional ^exponent
    fn factor(&mut self) -> Result<Word> {
        let a = self.atom()?;
        if let Some(Tok::Caret(cp)) = self.peek() {
            let cp = *cp;
            self.at += 1;
            match self.peek() {
                Some(Tok::Int(k, _)) => {
                    let k = *k;
                    self.at += 1;
                    Ok(a.pow(k))
                }
                _ => Err(Error::Parse { pos: cp + 1, msg: "expected integer exponent after ^".into() }),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(Tok::Name(name, pos)) => {
                let (name, pos) = (name.clone(), *pos);
                self.at += 1;
                match self.gens.iter().position(|g| *g == name) {
                    Some(i) => Word::generator(self.rank(), i + 1),
                    None => Err(Error::UnknownGenerator { name, pos }),
                }
            }
            Some(Tok::LParen(_)) => {
                self.at += 1;
                let w = self.product()?;
                match self.peek() {
                    Some(Tok::RParen(_)) => {
                        self.at += 1;
                        Ok(w)
                    }
                    t => Err(Error::Parse {
                        pos: t.map_or(usize::MAX, Tok::pos),
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some(Tok::LBrack(_)) => {
                self.at += 1;
                let a = self.product()?;
                match self.peek() {
                    Some(Tok::Comma(_)) => self.at += 1,
                    t => {
                        return Err(Error::Parse {
                            pos: t.map_or(usize::MAX, Tok::pos),
                            msg: "expected `,` in commutator".into(),
                        })
                    }
                }
                let b = self.product()?;
                match self.peek() {
                    Some(Tok::RBrack(_)) => {
                        self.at += 1;
                        commutator(&a, &b)
                    }
                    t => Err(Error::Parse {
                        pos: t.map_or(usize::MAX, Tok::pos),
                        msg: "expected `]`".into(),
                    }),
                }
            }
            t => Err(Error::Parse {
                pos: t.map_or(usize::MAX, Tok::pos),
                msg: "expected generator, `(` or `[`".into(),
            }),
        }
    }
}

/// Parses a word over the named generators.
///
/// Grammar: juxtaposition is product, `^k` is an integer power, `[a,b]` is the
/// commutator a b a^-1 b^-1, parentheses group.
pub fn parse_word(text: &str, gens: &[String]) -> Result<Word> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, gens };
    let w = p.product()?;
    match p.peek() {
        None => Ok(w),
        Some(t) => Err(Error::Parse { pos: t.pos(), msg: "unexpected token".into() }),
    }
}

/// Convenience names x1..xn.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Automorphism of a free group, carried as generator images.
/// Constructors only produce braid-induced automorphisms, so every value
/// is invertible by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism {
            rank,
            images: (1..=rank).map(|i| Word::generator(rank, i).unwrap()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    /// Elementary braid sigma_i on n strands:
    /// x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}.
    pub fn sigma(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i + 1 > n {
            return Err(Error::BadGenerator { index: i, rank: n.saturating_sub(1) });
        }
        let mut a = FreeAutomorphism::identity(n);
        let (xi, xj) = (i as i32, (i + 1) as i32);
        a.images[i - 1] = Word::new(n, vec![xj])?;
        a.images[i] = Word::new(n, vec![-xj, xi, xj])?;
        Ok(a)
    }

    /// Inverse of sigma_i: x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i.
    pub fn sigma_inv(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i + 1 > n {
            return Err(Error::BadGenerator { index: i, rank: n.saturating_sub(1) });
        }
        let mut a = FreeAutomorphism::identity(n);
        let (xi, xj) = (i as i32, (i + 1) as i32);
        a.images[i - 1] = Word::new(n, vec![xi, xj, -xi])?;
        a.images[i] = Word::new(n, vec![xi])?;
        Ok(a)
    }

    /// Substitutes generator images into w.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(w.rank(), self.rank));
        }
        let mut out = Word::empty(self.rank);
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            out = if l > 0 { out.mul(img)? } else { out.mul(&img.inverse())? };
        }
        Ok(out)
    }

    /// (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeAutomorphism { rank: self.rank, images })
    }

    /// Action of a braid word on n strands; letters of `braid` index the
    /// sigma generators (rank n-1), read left to right as outermost first.
    pub fn from_braid_word(braid: &Word, n: usize) -> Result<Self> {
        if n == 0 || braid.rank() + 1 != n {
            return Err(Error::RankMismatch(braid.rank() + 1, n));
        }
        let mut a = FreeAutomorphism::identity(n);
        for &l in braid.letters() {
            let s = if l > 0 {
                FreeAutomorphism::sigma(l as usize, n)?
            } else {
                FreeAutomorphism::sigma_inv((-l) as usize, n)?
            };
            a = a.compose(&s)?;
        }
        Ok(a)
    }

    /// Induced permutation of generators read off the abelianization;
    /// None if some image does not abelianize to a single generator.
    pub fn permutation(&self) -> Option<Vec<usize>> {
        let mut p = Vec::with_capacity(self.rank);
        for img in &self.images {
            let e = img.exponent_sums();
            let mut hits = e.iter().enumerate().filter(|(_, &v)| v != 0);
            match (hits.next(), hits.next()) {
                (Some((j, &1)), None) => p.push(j + 1),
                _ => return None,
            }
        }
        Some(p)
    }
}

/// Pure braid generator A_ij = (s_{j-1} ... s_{i+1}) s_i^2 (s_{j-1} ... s_{i+1})^-1
/// acting on the free group of rank n.
pub fn pure_braid_generator(i: usize, j: usize, n: usize) -> Result<FreeAutomorphism> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::Invalid(format!("need 1 <= i < j <= n, got i={i}, j={j}, n={n}")));
    }
    let mut letters: Vec<i32> = ((i + 1)..j).rev().map(|k| k as i32).collect();
    letters.push(i as i32);
    letters.push(i as i32);
    letters.extend(((i + 1)..j).map(|k| -(k as i32)));
    let braid = Word::new(n - 1, letters)?;
    FreeAutomorphism::from_braid_word(&braid, n)
}

/// Finitely presented group: generator names plus relator words.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let rank = names.len();
        for r in &relators {
            if r.rank() != rank {
                return Err(Error::RankMismatch(r.rank(), rank));
            }
        }
        Ok(GroupPresentation { names, relators })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

/// Parses the presentation file format:
/// one `gens:` line naming the generators, then `rel:` lines; `#` starts a comment.
pub fn parse_presentation(text: &str) -> Result<GroupPresentation> {
    let mut names: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse { pos: lineno + 1, msg: format!("line {}: {msg}", lineno + 1) };
        if let Some(rest) = line.strip_prefix("gens:") {
            if names.is_some() {
                return Err(err("duplicate gens: line"));
            }
            let ns: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            if ns.is_empty() {
                return Err(err("gens: line names no generators"));
            }
            for n in &ns {
                let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && n.chars().all(|c| c.is_ascii_alphanumeric());
                if !ok {
                    return Err(err(&format!("bad generator name `{n}`")));
                }
            }
            let mut uniq = ns.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != ns.len() {
                return Err(err("duplicate generator name"));
            }
            names = Some(ns);
        } else if let Some(rest) = line.strip_prefix("rel:") {
            let Some(ns) = &names else {
                return Err(err("rel: before gens:"));
            };
            relators.push(parse_word(rest, ns)?);
        } else {
            return Err(err("expected gens: or rel:"));
        }
    }
    let names = names.ok_or(Error::Parse { pos: 0, msg: "missing gens: line".into() })?;
    Ok(GroupPresentation { names, relators })
}
