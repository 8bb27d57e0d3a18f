//! Readers for the native profile format and PrefLib-style tie notation.
//!
//! Native format:
//!
//! ```text
//! # comment
//! candidates: a,b,c,d,e
//! 1: a ~ c > b > e ~ d
//! 2: a > b > c > e ~ d
//! ```
//!
//! PrefLib style: `# ALTERNATIVE NAME <i>: <name>` and
//! `# NUMBER ALTERNATIVES: <n>` header lines, then `count: i,{j,k},l` vote
//! lines with 1-based integer ids. Braces group indifferent candidates.

use std::collections::{BTreeMap, HashMap};

use crate::error::{ParseError, ParseErrorKind};
use crate::profile::{is_valid_name, CandidateId, Profile, Vote, WeakOrder};

/// Parses the native profile format.
pub fn parse_native(text: &str) -> Result<Profile, ParseError> {
    let mut lines = content_lines(text);

    let (header_line, header) =
        lines.next().ok_or_else(|| ParseError::new(1, ParseErrorKind::MissingHeader))?;
    let names_text = header
        .strip_prefix("candidates:")
        .ok_or_else(|| ParseError::new(header_line, ParseErrorKind::MissingHeader))?;

    let mut names = Vec::new();
    let mut by_name = HashMap::new();
    for raw in names_text.split(',') {
        let name = raw.trim();
        if !is_valid_name(name) {
            return Err(ParseError::new(header_line, ParseErrorKind::InvalidName(name.to_owned())));
        }
        if by_name.insert(name.to_owned(), names.len()).is_some() {
            return Err(ParseError::new(header_line, ParseErrorKind::DuplicateName(name.to_owned())));
        }
        names.push(name.to_owned());
    }
    let m = names.len();

    let mut votes = Vec::new();
    for (line_no, line) in lines {
        let err = |kind| ParseError::new(line_no, kind);
        let (count, ranking) = line
            .split_once(':')
            .ok_or_else(|| err(ParseErrorKind::Syntax("expected `<multiplicity>: <ranking>`".into())))?;
        let multiplicity = parse_multiplicity(count.trim()).map_err(err)?;

        let mut seen = vec![false; m];
        let mut tiers = Vec::new();
        for tier_text in ranking.split('>') {
            let mut tier = Vec::new();
            for raw in tier_text.split('~') {
                let name = raw.trim();
                if name.is_empty() {
                    return Err(err(ParseErrorKind::Syntax("empty candidate name in ranking".into())));
                }
                let &id = by_name
                    .get(name)
                    .ok_or_else(|| err(ParseErrorKind::UnknownCandidate(name.to_owned())))?;
                if seen[id] {
                    return Err(err(ParseErrorKind::RepeatedCandidate(name.to_owned())));
                }
                seen[id] = true;
                tier.push(id);
            }
            tiers.push(tier);
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(err(ParseErrorKind::MissingCandidate(names[missing].clone())));
        }
        let order = WeakOrder::new(tiers, m).expect("tiers validated above");
        votes.push(Vote { multiplicity, order });
    }

    Ok(Profile::new(names, votes).expect("profile validated above"))
}

/// Parses PrefLib-style vote lines.
///
/// With `complete_missing_last`, candidates a vote leaves out are ranked
/// together in one final tier; without it such votes are rejected.
pub fn parse_preflib(text: &str, complete_missing_last: bool) -> Result<Profile, ParseError> {
    let mut declared_count: Option<(usize, usize)> = None;
    let mut declared_names: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    let mut vote_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(rest) = meta.strip_prefix("NUMBER ALTERNATIVES:") {
                let n = rest.trim().parse::<usize>().map_err(|_| {
                    ParseError::new(
                        line_no,
                        ParseErrorKind::Syntax(format!("bad alternative count `{}`", rest.trim())),
                    )
                })?;
                declared_count = Some((line_no, n));
            } else if let Some(rest) = meta.strip_prefix("ALTERNATIVE NAME") {
                let (id, name) = rest.split_once(':').ok_or_else(|| {
                    ParseError::new(
                        line_no,
                        ParseErrorKind::Syntax("expected `# ALTERNATIVE NAME <id>: <name>`".into()),
                    )
                })?;
                let id = id.trim().parse::<usize>().map_err(|_| {
                    ParseError::new(
                        line_no,
                        ParseErrorKind::Syntax(format!("bad alternative id `{}`", id.trim())),
                    )
                })?;
                declared_names.insert(id, (line_no, sanitize_name(name.trim())));
            }
            continue;
        }
        vote_lines.push((line_no, line));
    }

    // Alternatives are 1..=n.
    let n = match declared_count {
        Some((_, n)) => n,
        None => declared_names.keys().copied().max().unwrap_or(0),
    };
    if n == 0 {
        let line = vote_lines.first().map_or(1, |(l, _)| *l);
        return Err(ParseError::new(line, ParseErrorKind::MissingHeader));
    }
    let mut names = Vec::with_capacity(n);
    let mut by_name = HashMap::new();
    for id in 1..=n {
        let (line_no, name) = declared_names
            .get(&id)
            .cloned()
            .unwrap_or_else(|| (declared_count.map_or(1, |(l, _)| l), id.to_string()));
        if by_name.insert(name.clone(), id).is_some() {
            return Err(ParseError::new(line_no, ParseErrorKind::DuplicateName(name)));
        }
        names.push(name);
    }
    if let Some((&id, &(line_no, _))) = declared_names.range(n + 1..).next() {
        return Err(ParseError::new(line_no, ParseErrorKind::UnknownCandidate(id.to_string())));
    }
    if let Some((&id, &(line_no, _))) = declared_names.range(..1).next() {
        return Err(ParseError::new(line_no, ParseErrorKind::UnknownCandidate(id.to_string())));
    }

    let mut votes = Vec::with_capacity(vote_lines.len());
    for (line_no, line) in vote_lines {
        let err = |kind| ParseError::new(line_no, kind);
        let (count, ranking) = line
            .split_once(':')
            .ok_or_else(|| err(ParseErrorKind::Syntax("expected `<count>: <ranking>`".into())))?;
        let multiplicity = parse_multiplicity(count.trim()).map_err(err)?;

        let mut tiers = parse_preflib_ranking(ranking, n).map_err(err)?;
        let mut seen = vec![false; n];
        for &c in tiers.iter().flatten() {
            if seen[c] {
                return Err(err(ParseErrorKind::RepeatedCandidate(names[c].clone())));
            }
            seen[c] = true;
        }
        let missing: Vec<CandidateId> = (0..n).filter(|&c| !seen[c]).collect();
        if !missing.is_empty() {
            if !complete_missing_last {
                return Err(err(ParseErrorKind::IncompleteVote(names[missing[0]].clone())));
            }
            tiers.push(missing);
        }
        let order = WeakOrder::new(tiers, n).expect("tiers validated above");
        votes.push(Vote { multiplicity, order });
    }

    Ok(Profile::new(names, votes).expect("profile validated above"))
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_multiplicity(text: &str) -> Result<u64, ParseErrorKind> {
    let value =
        text.parse::<u64>().map_err(|_| ParseErrorKind::Syntax(format!("bad multiplicity `{text}`")))?;
    if value == 0 {
        return Err(ParseErrorKind::ZeroMultiplicity);
    }
    Ok(value)
}

/// PrefLib names may contain spaces; map anything the native format cannot
/// carry to `_`.
fn sanitize_name(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|ch| if ch.is_whitespace() || matches!(ch, '>' | '~' | ',' | ':') { '_' } else { ch })
        .collect();
    if cleaned.is_empty() {
        "_".to_owned()
    } else {
        cleaned
    }
}

/// Splits `i,{j,k},l` into tiers of dense (0-based) ids.
fn parse_preflib_ranking(text: &str, n: usize) -> Result<Vec<Vec<CandidateId>>, ParseErrorKind> {
    let mut tiers: Vec<Vec<CandidateId>> = Vec::new();
    let mut group: Option<Vec<CandidateId>> = None;
    // Whether a separator (or the line start) is expected before the next item.
    let mut need_item = true;
    let mut chars = text.chars().peekable();

    let resolve = |token: &str| -> Result<CandidateId, ParseErrorKind> {
        let id = token
            .parse::<usize>()
            .map_err(|_| ParseErrorKind::Syntax(format!("bad candidate id `{token}`")))?;
        if id == 0 || id > n {
            return Err(ParseErrorKind::UnknownCandidate(token.to_owned()));
        }
        Ok(id - 1)
    };

    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' => {
                chars.next();
                if group.is_some() {
                    return Err(ParseErrorKind::MalformedBraces("nested `{`".into()));
                }
                if !need_item {
                    return Err(ParseErrorKind::Syntax("missing `,` before `{`".into()));
                }
                group = Some(Vec::new());
            }
            '}' => {
                chars.next();
                let members =
                    group.take().ok_or_else(|| ParseErrorKind::MalformedBraces("unmatched `}`".into()))?;
                if members.is_empty() {
                    return Err(ParseErrorKind::MalformedBraces("empty `{}` group".into()));
                }
                if need_item {
                    return Err(ParseErrorKind::MalformedBraces("trailing `,` inside braces".into()));
                }
                tiers.push(members);
                need_item = false;
            }
            ',' => {
                chars.next();
                if need_item {
                    return Err(ParseErrorKind::Syntax("unexpected `,`".into()));
                }
                need_item = true;
            }
            c if c.is_ascii_digit() => {
                if !need_item {
                    return Err(ParseErrorKind::Syntax("missing `,` between candidates".into()));
                }
                let mut token = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        token.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let id = resolve(&token)?;
                match group.as_mut() {
                    Some(members) => members.push(id),
                    None => tiers.push(vec![id]),
                }
                need_item = false;
            }
            other => return Err(ParseErrorKind::Syntax(format!("unexpected character `{other}`"))),
        }
    }
    if group.is_some() {
        return Err(ParseErrorKind::MalformedBraces("unclosed `{`".into()));
    }
    if need_item {
        return Err(ParseErrorKind::Syntax(if tiers.is_empty() {
            "empty ranking".into()
        } else {
            "trailing `,`".into()
        }));
    }
    Ok(tiers)
}
