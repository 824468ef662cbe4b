//! Text forms of cards, hands and group elements.
//!
//! A card is written as its `d` digits in base `k` (so only decks with
//! `k <= 10` have a text form), attribute 0 first: `0121`. A hand is a
//! whitespace-separated list of cards; anything after `#` on a line is a
//! comment. A group element is written
//! `psi=<d digits>;theta_0=<k digits>;...;theta_<d-1>=<k digits>`, where the
//! `psi` digits are the images of attributes `0..d` and `theta_a` lists the
//! images of values `0..k` for source attribute `a`.

use std::fmt::Write as _;

use crate::deck::{Card, DeckSpec, Hand};
use crate::error::{Error, Result};
use crate::group::GroupElement;

fn digit_char(v: u32) -> char {
    char::from_digit(v, 10).expect("text forms need k <= 10")
}

fn check_textual(spec: &DeckSpec) -> Result<()> {
    if spec.k() > 10 {
        return Err(Error::UnsupportedSpec { op: "text form", k: spec.k(), d: spec.d() });
    }
    Ok(())
}

pub fn format_card(spec: &DeckSpec, index: u32) -> String {
    spec.digits_of(index).iter().map(|&v| digit_char(v as u32)).collect()
}

pub fn card_to_string(card: &Card) -> String {
    card.digits().iter().map(|&v| digit_char(v as u32)).collect()
}

pub fn format_hand(hand: &Hand) -> String {
    let spec = hand.spec();
    let mut out = String::new();
    for (n, i) in hand.indices().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        out.push_str(&format_card(&spec, i));
    }
    out
}

/// Parses one card token; `pos` is reported in errors.
pub fn parse_card_at(spec: &DeckSpec, token: &str, pos: usize) -> Result<Card> {
    check_textual(spec)?;
    if token.chars().count() != spec.d() as usize {
        return Err(Error::parse(
            pos,
            format!("card {token:?} must have exactly {} digits", spec.d()),
        ));
    }
    let mut digits = Vec::with_capacity(token.len());
    for (offset, ch) in token.char_indices() {
        match ch.to_digit(10) {
            Some(v) if v < spec.k() => digits.push(v as u8),
            _ => {
                return Err(Error::parse(
                    pos + offset,
                    format!("{ch:?} is not a digit below {}", spec.k()),
                ))
            }
        }
    }
    Ok(Card::new(digits))
}

pub fn parse_card(spec: &DeckSpec, token: &str) -> Result<Card> {
    parse_card_at(spec, token.trim(), 0)
}

/// Parses a hand; `#` starts a comment that runs to the end of the line.
pub fn parse_hand(spec: &DeckSpec, text: &str) -> Result<Hand> {
    let cards = parse_card_list(spec, text)?;
    let mut indices = Vec::with_capacity(cards.len());
    for (pos, card) in &cards {
        let i = spec.index(card)?;
        if indices.contains(&i) {
            return Err(Error::parse(*pos, format!("duplicate card {}", card_to_string(card))));
        }
        indices.push(i);
    }
    Hand::from_indices(*spec, indices)
}

/// Cards in input order, each with its byte offset.
pub fn parse_card_list(spec: &DeckSpec, text: &str) -> Result<Vec<(usize, Card)>> {
    let mut cards = Vec::new();
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for token in body.split_whitespace() {
            let at = body[offset..].find(token).expect("token comes from body") + offset;
            offset = at + token.len();
            cards.push((line_start + at, parse_card_at(spec, token, line_start + at)?));
        }
        line_start += line.len();
    }
    Ok(cards)
}

pub fn format_element(g: &GroupElement) -> String {
    let mut out = String::from("psi=");
    out.extend(g.attr_perm().iter().map(|&a| digit_char(a as u32)));
    for (a, m) in g.value_maps().iter().enumerate() {
        write!(out, ";theta_{a}=").unwrap();
        out.extend(m.iter().map(|&v| digit_char(v as u32)));
    }
    out
}

fn parse_digits(s: &str, pos: usize) -> Result<Vec<u8>> {
    s.char_indices()
        .map(|(i, ch)| {
            ch.to_digit(10)
                .map(|v| v as u8)
                .ok_or_else(|| Error::parse(pos + i, format!("{ch:?} is not a digit")))
        })
        .collect()
}

pub fn parse_element(spec: &DeckSpec, text: &str) -> Result<GroupElement> {
    check_textual(spec)?;
    if spec.d() > 10 {
        return Err(Error::UnsupportedSpec { op: "text form", k: spec.k(), d: spec.d() });
    }
    let text = text.trim();
    let d = spec.d() as usize;
    let mut attr_perm = None;
    let mut value_maps: Vec<Option<Vec<u8>>> = vec![None; d];
    let mut pos = 0;
    for field in text.split(';') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(pos, format!("expected key=value, got {field:?}")))?;
        let vpos = pos + key.len() + 1;
        let key = key.trim();
        if key == "psi" {
            attr_perm = Some(parse_digits(value.trim(), vpos)?);
        } else if let Some(a) = key.strip_prefix("theta_") {
            let a: usize = a
                .parse()
                .ok()
                .filter(|&a| a < d)
                .ok_or_else(|| Error::parse(pos, format!("bad attribute in {key:?}")))?;
            if value_maps[a].is_some() {
                return Err(Error::parse(pos, format!("{key} given twice")));
            }
            value_maps[a] = Some(parse_digits(value.trim(), vpos)?);
        } else {
            return Err(Error::parse(pos, format!("unknown key {key:?}")));
        }
        pos += field.len() + 1;
    }
    let attr_perm = attr_perm.ok_or_else(|| Error::parse(0, "missing psi"))?;
    let value_maps = value_maps
        .into_iter()
        .enumerate()
        .map(|(a, m)| m.ok_or_else(|| Error::parse(text.len(), format!("missing theta_{a}"))))
        .collect::<Result<Vec<_>>>()?;
    GroupElement::new(spec, attr_perm, value_maps)
}
