use std::collections::BTreeMap;

use super::action::{AmbGen, AmbLetter};
use super::KError;

/// Conjugation formulas `a_{i,k} a_{1,k'} a_{i,k}⁻¹` supplied by the user.
///
/// File format, one entry per line (`#` starts a comment):
/// `A(i,k) a(1,k') -> <word over a(1,*) and T(1,*)>`, letters separated by
/// whitespace or dots, `^-1` for inverses and `1` for the empty word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeripheralTable {
    entries: BTreeMap<(usize, u32, u32), Vec<AmbLetter>>,
}

impl PeripheralTable {
    pub fn empty() -> Self {
        PeripheralTable::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub(crate) fn get(&self, i: usize, k: u32, target: u32) -> Option<&Vec<AmbLetter>> {
        self.entries.get(&(i, k, target))
    }

    pub fn parse(text: &str, n: usize, genus: u32) -> Result<Self, KError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |detail: String| KError::MalformedTable { line: line_no, detail };
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| bad("missing `->`".into()))?;
            let mut parts = lhs.split_whitespace();
            let (actor, target) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(t), None) => (a, t),
                _ => return Err(bad("left side must be `A(i,k) a(1,k')`".into())),
            };
            let (i, k) = parse_pair(actor, "A").ok_or_else(|| bad(format!("bad actor `{actor}`")))?;
            let (one, target_k) = parse_pair(target, "a").ok_or_else(|| bad(format!("bad target `{target}`")))?;
            if one != 1 || !(2..=n).contains(&i) {
                return Err(bad("need actor A(i,k) with 2 <= i <= n and target a(1,k')".into()));
            }
            let (k, target_k) = (k as u32, target_k as u32);
            if !(1..=2 * genus).contains(&k) || !(1..=2 * genus).contains(&target_k) {
                return Err(bad(format!("generator index out of 1..={}", 2 * genus)));
            }
            let mut word = Vec::new();
            for token in rhs.split(|c: char| c.is_whitespace() || c == '.').filter(|t| !t.is_empty()) {
                if token == "1" {
                    continue;
                }
                let (body, inverse) = match token.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (token, false),
                };
                let gen = if let Some((1, j)) = parse_pair(body, "T") {
                    if !(2..=n).contains(&j) {
                        return Err(bad(format!("strand out of range in `{token}`")));
                    }
                    AmbGen::T(j)
                } else if let Some((1, kk)) = parse_pair(body, "a") {
                    if !(1..=2 * genus as usize).contains(&kk) {
                        return Err(bad(format!("generator out of range in `{token}`")));
                    }
                    AmbGen::A(kk as u32)
                } else {
                    return Err(bad(format!("bad letter `{token}`")));
                };
                word.push(AmbLetter { gen, inverse });
            }
            entries.insert((i, k, target_k), word);
        }
        Ok(PeripheralTable { entries })
    }
}

fn parse_pair(token: &str, head: &str) -> Option<(usize, usize)> {
    let inner = token.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_comments() {
        let text = "# demo\nA(2,1) a(1,2) -> a(1,2) T(1,2)^-1\n\nA(3,2) a(1,1) -> 1\n";
        let t = PeripheralTable::parse(text, 3, 1).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t.get(2, 1, 2).unwrap(),
            &vec![
                AmbLetter { gen: AmbGen::A(2), inverse: false },
                AmbLetter { gen: AmbGen::T(2), inverse: true }
            ]
        );
        assert!(t.get(3, 2, 1).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_lines() {
        for text in ["A(2,1) a(1,2)", "A(1,1) a(1,1) -> 1", "A(2,3) a(1,1) -> 1", "A(2,1) a(1,1) -> T(1,9)", "A(2,1) a(2,1) -> 1"] {
            let err = PeripheralTable::parse(text, 3, 1).unwrap_err();
            assert!(matches!(err, KError::MalformedTable { line: 1, .. }), "{text}");
        }
    }
}
