use std::sync::Arc;

use num_rational::Ratio;

use super::lexer::{lex, Tok, Token};
use crate::catalog::{CuspidalGl2, Environment, Gl2Rep, Gsp4Rep, OpaqueCusp, Param, TypeSymbol};
use crate::character::{half, Character, CharacterK, Context, Rational};
use crate::error::{Error, ParseError, ParseErrorKind, Result};

type PResult<T> = std::result::Result<T, ParseError>;

/// Exponents produced while parsing stay below this in absolute value.
const BOUND: i128 = 1 << 24;
const MAX_DEPTH: usize = 32;

const MARKERS: &[&str] = &["St", "one", "St_G", "one_G", "S", "T"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Marker {
    St,
    One,
    StG,
    OneG,
    S,
    T,
}

impl Marker {
    fn from_word(w: &str) -> Option<Marker> {
        Some(match w {
            "St" => Marker::St,
            "one" => Marker::One,
            "St_G" => Marker::StG,
            "one_G" => Marker::OneG,
            "S" => Marker::S,
            "T" => Marker::T,
            _ => return None,
        })
    }
}

/// A juxtaposition of characters with at most one marker, cuspidal name or
/// opaque reference, e.g. `nu^{1/2} xi St` or `sigma pi`.
#[derive(Clone, Debug)]
struct Piece {
    chars: Character,
    marker: Option<Marker>,
    cusp: Option<CuspidalGl2>,
    opaque: Option<OpaqueCusp>,
    atoms: usize,
}

impl Piece {
    fn pure(&self) -> Option<&Character> {
        (self.marker.is_none() && self.cusp.is_none() && self.opaque.is_none())
            .then_some(&self.chars)
    }

    fn marked(&self, m: Marker) -> Option<&Character> {
        (self.marker == Some(m) && self.cusp.is_none() && self.opaque.is_none())
            .then_some(&self.chars)
    }

    /// `chars ⊗ π`.
    fn cuspidal(&self) -> Option<CuspidalGl2> {
        if self.marker.is_some() || self.opaque.is_some() {
            return None;
        }
        self.cusp.as_ref().map(|pi| pi.twisted(&self.chars))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sep {
    Times,
    Rtimes,
}

#[derive(Clone, Debug)]
struct Segment {
    pieces: Vec<Piece>,
    seps: Vec<Sep>,
}

impl Segment {
    fn single(&self) -> Option<&Piece> {
        (self.pieces.len() == 1).then(|| &self.pieces[0])
    }
}

#[derive(Clone, Debug)]
enum Arg {
    Seg(Segment),
    Bracket(Vec<Segment>),
}

impl Arg {
    fn seg(&self) -> Option<&Segment> {
        match self {
            Arg::Seg(s) => Some(s),
            Arg::Bracket(_) => None,
        }
    }

    fn piece(&self) -> Option<&Piece> {
        self.seg().and_then(Segment::single)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head {
    L,
    Delta,
    Tau,
    Theta,
}

enum Shape {
    Named(Head, Vec<Arg>),
    Induced(Segment),
}

fn to_parse(e: Error, offset: usize) -> ParseError {
    match e {
        Error::Parse(p) => p,
        Error::UnknownName(n) => ParseError::new(offset, ParseErrorKind::UnknownName(n)),
        other => ParseError::new(offset, ParseErrorKind::Invalid(other.to_string())),
    }
}

fn ratio128(r: Rational) -> Ratio<i128> {
    Ratio::new(*r.numer() as i128, *r.denom() as i128)
}

fn bounded(r: &Ratio<i128>) -> bool {
    r.numer().abs() <= BOUND && *r.denom() <= BOUND
}

struct Parser<'a> {
    ctx: Arc<Context>,
    env: Option<&'a Environment>,
    toks: Vec<Token>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(
        src: &str,
        base: usize,
        ctx: Arc<Context>,
        env: Option<&'a Environment>,
    ) -> PResult<Self> {
        Ok(Parser {
            ctx,
            env,
            toks: lex(src, base)?,
            pos: 0,
            end: base + src.len(),
            depth: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            None => ParseError::new(self.end, ParseErrorKind::UnexpectedEnd),
            Some(t) => ParseError::new(
                self.offset(),
                ParseErrorKind::Expected {
                    expected: expected.into(),
                    found: t.describe(),
                },
            ),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", tok.describe())))
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(
                self.offset(),
                ParseErrorKind::Invalid("nesting too deep".into()),
            ));
        }
        Ok(())
    }

    fn is_cusp_name(&self, n: &str) -> bool {
        self.env.is_some_and(|e| e.cuspidal(n).is_some())
    }

    /// Whether the next token can begin a character factor.
    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(n)) => {
                n != "x" && n != "cusp" && !MARKERS.contains(&n.as_str()) && !self.is_cusp_name(n)
            }
            Some(Tok::ChiKK | Tok::Num(_) | Tok::LParen) => true,
            _ => false,
        }
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    /// `^{p/q}`, `^{n}` or `^n`, with the caret already consumed.
    fn exponent(&mut self) -> PResult<Rational> {
        let offset = self.offset();
        if self.peek() == Some(&Tok::LBrace) {
            self.pos += 1;
            let p = self.signed_int()?;
            let q = if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                match self.bump() {
                    Some(Tok::Num(q)) => q,
                    _ => {
                        return Err(ParseError::new(
                            offset,
                            ParseErrorKind::MalformedRational("missing denominator".into()),
                        ))
                    }
                }
            } else {
                1
            };
            self.expect(Tok::RBrace)?;
            if q == 0 {
                return Err(ParseError::new(
                    offset,
                    ParseErrorKind::MalformedRational(format!("{p}/0")),
                ));
            }
            Ok(Rational::new(p, q))
        } else {
            Ok(Rational::from_integer(self.signed_int()?))
        }
    }

    fn int_exponent(&mut self) -> PResult<i64> {
        let offset = self.offset();
        let e = self.exponent()?;
        if !e.is_integer() {
            return Err(ParseError::new(
                offset,
                ParseErrorKind::Invalid(format!("exponent {e} must be an integer")),
            ));
        }
        Ok(*e.numer())
    }

    fn too_large(&self, offset: usize) -> ParseError {
        ParseError::new(offset, ParseErrorKind::Invalid("exponent too large".into()))
    }

    fn mul(&self, a: &Character, b: &Character, offset: usize) -> PResult<Character> {
        for (g, e) in b.generator_exponents() {
            let sum = *a.generator_exponents().get(g).unwrap_or(&0) as i128 + *e as i128;
            if sum.abs() > BOUND {
                return Err(self.too_large(offset));
            }
        }
        if !bounded(&(ratio128(a.nu_exponent()) + ratio128(b.nu_exponent()))) {
            return Err(self.too_large(offset));
        }
        a.try_mul(b).map_err(|e| to_parse(e, offset))
    }

    fn pow(&self, a: &Character, n: i64, offset: usize) -> PResult<Character> {
        let ok = a
            .generator_exponents()
            .values()
            .all(|e| (*e as i128 * n as i128).abs() <= BOUND)
            && bounded(&(ratio128(a.nu_exponent()) * n as i128));
        if !ok {
            return Err(self.too_large(offset));
        }
        Ok(a.pow(n))
    }

    fn atom(&mut self) -> PResult<Character> {
        let offset = self.offset();
        let base = match self.bump() {
            Some(Tok::Ident(n)) if n == "nu" => {
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    Rational::from_integer(1)
                };
                if !bounded(&ratio128(e)) {
                    return Err(self.too_large(offset));
                }
                return self.ctx.nu(e).map_err(|e| to_parse(e, offset));
            }
            Some(Tok::Ident(n)) => {
                if crate::character::RESERVED_NAMES.contains(&n.as_str()) {
                    return Err(ParseError::new(
                        offset,
                        ParseErrorKind::Expected {
                            expected: "a character".into(),
                            found: n,
                        },
                    ));
                }
                self.ctx.generator(&n).map_err(|e| to_parse(e, offset))?
            }
            Some(Tok::ChiKK) => self.ctx.chi_kk(),
            Some(Tok::Num(1)) => self.ctx.trivial(),
            Some(Tok::LParen) => {
                self.enter()?;
                let c = self.char_expr()?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                c
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a character"));
            }
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let n = self.int_exponent()?;
            return self.pow(&base, n, offset);
        }
        Ok(base)
    }

    /// `term (('*')? term)*`.
    fn char_expr(&mut self) -> PResult<Character> {
        let offset = self.offset();
        let mut acc = self.atom()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                let next = self.atom()?;
                acc = self.mul(&acc, &next, offset)?;
            } else if self.starts_atom() {
                let next = self.atom()?;
                acc = self.mul(&acc, &next, offset)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn new_piece(&self) -> Piece {
        Piece {
            chars: self.ctx.trivial(),
            marker: None,
            cusp: None,
            opaque: None,
            atoms: 0,
        }
    }

    fn duplicate(&self, offset: usize) -> ParseError {
        ParseError::new(
            offset,
            ParseErrorKind::Invalid("more than one marker or cuspidal in one factor".into()),
        )
    }

    fn item(&mut self, piece: &mut Piece) -> PResult<()> {
        let offset = self.offset();
        if let Some(Tok::Ident(n)) = self.peek() {
            let n = n.clone();
            if let Some(m) = Marker::from_word(&n) {
                self.pos += 1;
                if piece.marker.is_some() || piece.cusp.is_some() || piece.opaque.is_some() {
                    return Err(self.duplicate(offset));
                }
                piece.marker = Some(m);
                piece.atoms += 1;
                return Ok(());
            }
            if n == "cusp" && self.peek_at(1) == Some(&Tok::LParen) {
                self.pos += 2;
                let o = self.opaque_ref(offset)?;
                if piece.marker.is_some() || piece.cusp.is_some() || piece.opaque.is_some() {
                    return Err(self.duplicate(offset));
                }
                piece.opaque = Some(o);
                piece.atoms += 1;
                return Ok(());
            }
            if let Some(pi) = self.env.and_then(|e| e.cuspidal(&n)) {
                self.pos += 1;
                if piece.marker.is_some() || piece.cusp.is_some() || piece.opaque.is_some() {
                    return Err(self.duplicate(offset));
                }
                piece.cusp = Some(pi);
                piece.atoms += 1;
                return Ok(());
            }
        }
        let c = self.atom()?;
        piece.chars = self.mul(&piece.chars, &c, offset)?;
        piece.atoms += 1;
        Ok(())
    }

    /// `cusp(name)` or `cusp(name, twist)` after `cusp(`.
    fn opaque_ref(&mut self, offset: usize) -> PResult<OpaqueCusp> {
        let name = match self.bump() {
            Some(Tok::Ident(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a cuspidal name"));
            }
        };
        let base = self
            .env
            .and_then(|e| e.opaque(&name))
            .ok_or_else(|| ParseError::new(offset, ParseErrorKind::UnknownName(name.clone())))?;
        let twist = if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            self.char_expr()?
        } else {
            self.ctx.trivial()
        };
        self.expect(Tok::RParen)?;
        Ok(OpaqueCusp {
            data: base.data,
            twist,
        })
    }

    fn segment(&mut self) -> PResult<Segment> {
        let mut seg = Segment {
            pieces: vec![self.new_piece()],
            seps: Vec::new(),
        };
        loop {
            let sep = match self.peek() {
                None | Some(Tok::Comma | Tok::RParen | Tok::RBracket) => break,
                Some(Tok::Ident(n)) if n == "x" => Some(Sep::Times),
                Some(Tok::Rtimes) => Some(Sep::Rtimes),
                Some(Tok::Star) => {
                    self.pos += 1;
                    continue;
                }
                _ => None,
            };
            match sep {
                Some(s) => {
                    if seg.pieces.last().is_some_and(|p| p.atoms == 0) {
                        return Err(self.unexpected("a factor"));
                    }
                    self.pos += 1;
                    seg.seps.push(s);
                    seg.pieces.push(self.new_piece());
                }
                None => {
                    let mut piece = seg.pieces.pop().expect("segment has a piece");
                    self.item(&mut piece)?;
                    seg.pieces.push(piece);
                }
            }
        }
        if seg.pieces.last().is_some_and(|p| p.atoms == 0) {
            return Err(self.unexpected("a factor"));
        }
        Ok(seg)
    }

    fn arg(&mut self) -> PResult<Arg> {
        if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let mut items = vec![self.segment()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                items.push(self.segment()?);
            }
            self.expect(Tok::RBracket)?;
            Ok(Arg::Bracket(items))
        } else {
            Ok(Arg::Seg(self.segment()?))
        }
    }

    fn shape(&mut self) -> PResult<Shape> {
        let head = match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Ident(n)), Some(Tok::LParen)) => match n.as_str() {
                "L" => Some(Head::L),
                "delta" => Some(Head::Delta),
                "tau" => Some(Head::Tau),
                _ => None,
            },
            (Some(Tok::Theta), Some(Tok::LParen)) => Some(Head::Theta),
            _ => None,
        };
        let shape = match head {
            Some(h) => {
                self.pos += 2;
                let mut args = vec![self.arg()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.arg()?);
                }
                self.expect(Tok::RParen)?;
                Shape::Named(h, args)
            }
            None => Shape::Induced(self.segment()?),
        };
        self.expect_end()?;
        Ok(shape)
    }
}

/// Parses a character expression: `term (('*')? term)*` where a term is a
/// generator name, `nu`, `nu^{p/q}`, `chi_{K/k}`, `1` or a parenthesized
/// expression, optionally raised to an integer power.
pub fn parse_character(text: &str, ctx: &Arc<Context>) -> Result<Character> {
    let mut p = Parser::new(text, 0, ctx.clone(), None)?;
    let c = p.char_expr()?;
    p.expect_end()?;
    Ok(c)
}

/// Parses a character of `K^×`: a product of declared abstract characters,
/// `norm(expr)` pullbacks and `1`, each optionally raised to an integer power.
pub fn parse_character_k(text: &str, ctx: &Arc<Context>) -> Result<CharacterK> {
    let mut p = Parser::new(text, 0, ctx.clone(), None)?;
    let c = kexpr(&mut p)?;
    p.expect_end()?;
    Ok(c)
}

fn kmul(p: &Parser, a: &CharacterK, b: &CharacterK, offset: usize) -> PResult<CharacterK> {
    let an = a.norm_part();
    let bn = b.norm_part();
    p.mul(&an, &bn, offset)?;
    for (g, e) in b.abstract_part() {
        let sum = *a.abstract_part().get(g).unwrap_or(&0) as i128 + *e as i128;
        if sum.abs() > BOUND {
            return Err(p.too_large(offset));
        }
    }
    a.try_mul(b).map_err(|e| to_parse(e, offset))
}

fn kpow(p: &Parser, a: &CharacterK, n: i64, offset: usize) -> PResult<CharacterK> {
    p.pow(&a.norm_part(), n, offset)?;
    if a.abstract_part()
        .values()
        .any(|e| (*e as i128 * n as i128).abs() > BOUND)
    {
        return Err(p.too_large(offset));
    }
    Ok(a.pow(n))
}

fn katom(p: &mut Parser) -> PResult<CharacterK> {
    let offset = p.offset();
    let base = match p.bump() {
        Some(Tok::Ident(n)) if n == "norm" => {
            p.expect(Tok::LParen)?;
            p.enter()?;
            let c = p.char_expr()?;
            p.expect(Tok::RParen)?;
            p.depth -= 1;
            crate::character::norm_pullback(&c)
        }
        Some(Tok::Ident(n)) => p.ctx.k_character(&n).map_err(|e| to_parse(e, offset))?,
        Some(Tok::Num(1)) => p.ctx.trivial_k(),
        Some(Tok::LParen) => {
            p.enter()?;
            let c = kexpr(p)?;
            p.expect(Tok::RParen)?;
            p.depth -= 1;
            c
        }
        _ => {
            p.pos -= 1;
            return Err(p.unexpected("a character of K^x"));
        }
    };
    if p.peek() == Some(&Tok::Caret) {
        p.pos += 1;
        let n = p.int_exponent()?;
        return kpow(p, &base, n, offset);
    }
    Ok(base)
}

fn kexpr(p: &mut Parser) -> PResult<CharacterK> {
    let offset = p.offset();
    let mut acc = katom(p)?;
    loop {
        match p.peek() {
            Some(Tok::Star) => {
                p.pos += 1;
            }
            Some(Tok::Ident(_) | Tok::Num(_) | Tok::LParen) => {}
            _ => return Ok(acc),
        }
        let next = katom(p)?;
        acc = kmul(p, &acc, &next, offset)?;
    }
}

/// Splits an optional `TYPE:` prefix.
fn split_prefix(text: &str) -> Result<(Option<TypeSymbol>, &str, usize)> {
    if let Some(i) = text.find(':') {
        let sym = text[..i].trim();
        let ty = sym.parse::<TypeSymbol>().map_err(|_| {
            Error::Parse(ParseError::new(
                0,
                ParseErrorKind::UnknownName(sym.to_string()),
            ))
        })?;
        return Ok((Some(ty), &text[i + 1..], i + 1));
    }
    Ok((None, text, 0))
}

fn no_match(offset: usize, what: &str) -> Error {
    Error::Parse(ParseError::new(
        offset,
        ParseErrorKind::NoMatch(what.to_string()),
    ))
}

/// Parses a `GSp(4)` representation in the classification notation, e.g.
/// `tau(T, nu^{-1/2} sigma)` or `chi1 x chi2 |x sigma`.
///
/// An optional `TYPE: ` prefix pins the type; it is required for Vc, whose
/// shape coincides with Vb.
pub fn parse_rep(text: &str, env: &Environment) -> Result<Gsp4Rep> {
    let (prefix, body, base) = split_prefix(text)?;
    let mut p = Parser::new(body, base, env.context().clone(), Some(env))?;
    let start = p.offset();
    let shape = p.shape()?;
    let rep = match_shape(&shape, prefix == Some(TypeSymbol::Vc), env.context(), start)?;
    if let Some(ty) = prefix {
        if ty != rep.symbol() {
            return Err(no_match(
                start,
                &format!("shape is {}, not {ty}", rep.symbol()),
            ));
        }
    }
    Ok(rep)
}

/// Parses a `GL(2)` representation: `a x b`, `a St`, `a one` or `a pi`.
pub fn parse_gl2(text: &str, env: &Environment) -> Result<Gl2Rep> {
    let mut p = Parser::new(text, 0, env.context().clone(), Some(env))?;
    let start = p.offset();
    let seg = p.segment()?;
    p.expect_end()?;
    let pieces = &seg.pieces;
    match (pieces.as_slice(), seg.seps.as_slice()) {
        ([a, b], [Sep::Times]) => match (a.pure(), b.pure()) {
            (Some(a), Some(b)) => Gl2Rep::principal(a.clone(), b.clone()),
            _ => Err(no_match(start, "principal series needs two characters")),
        },
        ([a], []) => {
            if let Some(m) = a.marked(Marker::St) {
                Ok(Gl2Rep::Special(m.clone()))
            } else if let Some(m) = a.marked(Marker::One) {
                Ok(Gl2Rep::OneDim(m.clone()))
            } else if let Some(pi) = a.cuspidal() {
                Ok(Gl2Rep::Cuspidal(pi))
            } else {
                Err(no_match(
                    start,
                    "expected `a x b`, `a St`, `a one` or a cuspidal",
                ))
            }
        }
        _ => Err(no_match(start, "not a GL(2) representation")),
    }
}

fn build(ty: TypeSymbol, params: Vec<Param>) -> Result<Gsp4Rep> {
    Gsp4Rep::from_parameters(ty, params)
}

fn ch(c: Character) -> Param {
    Param::Character(c)
}

fn match_shape(shape: &Shape, vc: bool, ctx: &Arc<Context>, start: usize) -> Result<Gsp4Rep> {
    use TypeSymbol as T;
    let h = half();
    let nu = |e: Rational| ctx.nu(e).expect("half-integral");
    let up = |c: &Character, e: Rational| c.times_nu(e);
    match shape {
        Shape::Induced(seg) => {
            let ps = &seg.pieces;
            match (ps.as_slice(), seg.seps.as_slice()) {
                ([a], []) => {
                    if let Some(s) = a.marked(Marker::StG) {
                        build(T::IVa, vec![ch(s.clone())])
                    } else if let Some(s) = a.marked(Marker::OneG) {
                        build(T::IVd, vec![ch(s.clone())])
                    } else if let (Some(o), true) = (&a.opaque, a.atoms == 1) {
                        let ty = if o.data.generic {
                            T::CuspGeneric
                        } else {
                            T::CuspOtherNonGeneric
                        };
                        build(ty, vec![Param::Opaque(o.clone())])
                    } else {
                        Err(no_match(start, "expected St_G, one_G or cusp(...)"))
                    }
                }
                ([a, b, c], [Sep::Times, Sep::Rtimes]) => match (a.pure(), b.pure(), c.pure()) {
                    (Some(a), Some(b), Some(c)) => {
                        build(T::I, vec![ch(a.clone()), ch(b.clone()), ch(c.clone())])
                    }
                    _ => Err(no_match(start, "Borel induction takes three characters")),
                },
                ([l, r], [Sep::Rtimes]) => {
                    if let (Some(chi), Some(s)) = (l.marked(Marker::St), r.pure()) {
                        build(T::IIa, vec![ch(chi.clone()), ch(s.clone())])
                    } else if let (Some(chi), Some(s)) = (l.marked(Marker::One), r.pure()) {
                        build(T::IIb, vec![ch(chi.clone()), ch(s.clone())])
                    } else if let (Some(chi), Some(s)) = (l.pure(), r.marked(Marker::St)) {
                        build(T::IIIa, vec![ch(chi.clone()), ch(s.clone())])
                    } else if let (Some(chi), Some(s)) = (l.pure(), r.marked(Marker::One)) {
                        build(T::IIIb, vec![ch(chi.clone()), ch(s.clone())])
                    } else if let (Some(chi), Some(pi)) = (l.pure(), r.cuspidal()) {
                        build(T::VII, vec![ch(chi.clone()), Param::Cuspidal(pi)])
                    } else if let (Some(pi), Some(s)) = (l.cuspidal(), r.pure()) {
                        build(T::X, vec![Param::Cuspidal(pi), ch(s.clone())])
                    } else {
                        Err(no_match(start, "no induced representation has this shape"))
                    }
                }
                _ => Err(no_match(start, "unrecognized induced shape")),
            }
        }
        Shape::Named(head, args) => {
            if args.len() != 2 {
                return Err(no_match(start, "named representations take two arguments"));
            }
            let (a, b) = (&args[0], &args[1]);
            match head {
                Head::L => {
                    let bp = b.piece();
                    if let (Some(x), Some(y)) = (
                        a.piece().and_then(|p| p.marked(Marker::St)),
                        bp.and_then(Piece::pure),
                    ) {
                        if vc {
                            let xi = up(x, -h);
                            let sigma = &xi * &up(y, h);
                            return build(T::Vc, vec![ch(xi), ch(sigma)]);
                        }
                        if *x == nu(Rational::new(3, 2)) {
                            return build(T::IVc, vec![ch(up(y, Rational::new(3, 2)))]);
                        }
                        if *x == nu(h) {
                            return build(T::VIc, vec![ch(up(y, h))]);
                        }
                        return build(T::Vb, vec![ch(up(x, -h)), ch(up(y, h))]);
                    }
                    if let (Some(x), Some(y)) = (
                        a.piece().and_then(Piece::pure),
                        bp.and_then(|p| p.marked(Marker::St)),
                    ) {
                        if *x != nu(2.into()) {
                            return Err(no_match(start, "L(a, b St) requires a = nu^{2}"));
                        }
                        return build(T::IVb, vec![ch(up(y, 1.into()))]);
                    }
                    if let (Some(x), Some(seg)) = (a.piece().and_then(Piece::pure), b.seg()) {
                        if let ([c, d], [Sep::Rtimes]) =
                            (seg.pieces.as_slice(), seg.seps.as_slice())
                        {
                            if let (Some(c), Some(d)) = (c.pure(), d.pure()) {
                                if *x != up(c, 1.into()) {
                                    return Err(no_match(
                                        start,
                                        "L(nu xi, xi |x b) needs matching xi",
                                    ));
                                }
                                if c.is_trivial() {
                                    return build(T::VId, vec![ch(up(d, h))]);
                                }
                                return build(T::Vd, vec![ch(c.clone()), ch(up(d, h))]);
                            }
                        }
                    }
                    if let (Some(pi), Some(y)) = (
                        a.piece().and_then(Piece::cuspidal),
                        bp.and_then(Piece::pure),
                    ) {
                        let pi = pi.twisted(&nu(-h));
                        return build(T::XIb, vec![Param::Cuspidal(pi), ch(up(y, h))]);
                    }
                    if let (Some(x), Some(pi)) = (
                        a.piece().and_then(Piece::pure),
                        bp.and_then(Piece::cuspidal),
                    ) {
                        let pi = pi.twisted(&nu(h));
                        return build(
                            T::IXb,
                            vec![ch(up(x, -Rational::from_integer(1))), Param::Cuspidal(pi)],
                        );
                    }
                    Err(no_match(start, "no Langlands quotient has this shape"))
                }
                Head::Delta => {
                    if let (Arg::Bracket(items), Some(y)) = (a, b.piece().and_then(Piece::pure)) {
                        let pure: Vec<_> = items
                            .iter()
                            .filter_map(|s| s.single().and_then(Piece::pure))
                            .collect();
                        if let [x0, x1] = pure.as_slice() {
                            if **x1 != up(x0, 1.into()) {
                                return Err(no_match(
                                    start,
                                    "delta([xi, nu xi], b) needs matching xi",
                                ));
                            }
                            return build(T::Va, vec![ch((*x0).clone()), ch(up(y, h))]);
                        }
                        return Err(no_match(start, "delta([a, b], c) takes two characters"));
                    }
                    let (ap, bp) = (a.piece(), b.piece());
                    if let (Some(pi), Some(y)) =
                        (ap.and_then(Piece::cuspidal), bp.and_then(Piece::pure))
                    {
                        let pi = pi.twisted(&nu(-h));
                        return build(T::XIa, vec![Param::Cuspidal(pi), ch(up(y, h))]);
                    }
                    if let (Some(x), Some(pi)) =
                        (ap.and_then(Piece::pure), bp.and_then(Piece::cuspidal))
                    {
                        let pi = pi.twisted(&nu(h));
                        return build(
                            T::IXa,
                            vec![ch(up(x, -Rational::from_integer(1))), Param::Cuspidal(pi)],
                        );
                    }
                    Err(no_match(
                        start,
                        "no essentially square-integrable shape matches",
                    ))
                }
                Head::Tau => {
                    let which = a.piece().and_then(|p| {
                        if p.marked(Marker::S).is_some_and(Character::is_trivial) {
                            Some(true)
                        } else if p.marked(Marker::T).is_some_and(Character::is_trivial) {
                            Some(false)
                        } else {
                            None
                        }
                    });
                    let Some(is_s) = which else {
                        return Err(no_match(start, "tau takes S or T first"));
                    };
                    let bp = b.piece();
                    if let Some(y) = bp.and_then(Piece::pure) {
                        let ty = if is_s { T::VIa } else { T::VIb };
                        return build(ty, vec![ch(up(y, h))]);
                    }
                    if let Some(pi) = bp.and_then(Piece::cuspidal) {
                        let ty = if is_s { T::VIIIa } else { T::VIIIb };
                        return build(ty, vec![Param::Cuspidal(pi)]);
                    }
                    Err(no_match(
                        start,
                        "tau(S|T, b) takes a character or a cuspidal",
                    ))
                }
                Head::Theta => {
                    let Some(s) = a.piece().and_then(|p| p.marked(Marker::St)) else {
                        return Err(no_match(start, "theta_- takes sigma St first"));
                    };
                    let bp = b.piece();
                    if let Some(y) = bp.and_then(|p| p.marked(Marker::St)) {
                        let xi = y * &s.inverse();
                        return build(T::VaStar, vec![ch(s.clone()), ch(xi)]);
                    }
                    if let Some(pi) = bp.and_then(Piece::cuspidal) {
                        let pi = pi.twisted(&s.inverse());
                        return build(T::XIaStar, vec![ch(s.clone()), Param::Cuspidal(pi)]);
                    }
                    Err(no_match(
                        start,
                        "theta_-(sigma St, b) takes xi sigma St or sigma pi",
                    ))
                }
            }
        }
    }
}
