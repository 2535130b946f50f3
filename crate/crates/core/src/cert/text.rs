//! Line-oriented certificate format.
//!
//! Every line is `key value`. Free-separation trees are written in
//! preorder, each node opened by `node <path>`; words below the root use
//! the basis names `s1, s2, …`.

use super::{
    surface_alphabet, Body, Certificate, FactorImages, FreeLift, FreeNode, FreeStep, Record, VerifyMode, FORMAT_VERSION,
};
use crate::error::{Error, Result};
use crate::pgroups::{parse_element, parse_group, GroupExpr, PElement};
use crate::schreier::ExponentHom;
use crate::words::{Alphabet, Word};

const MAGIC: &str = "respk-certificate";

struct Writer {
    out: String,
}

impl Writer {
    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        self.out.push_str(key);
        self.out.push(' ');
        self.out.push_str(&value.to_string());
        self.out.push('\n');
    }

    fn images(&mut self, key: &str, target: &GroupExpr, images: &[PElement]) {
        self.line(&format!("target{}", &key[5..]), target);
        for e in images {
            self.line(key, e);
        }
    }
}

pub fn emit(cert: &Certificate) -> String {
    let mut w = Writer { out: String::new() };
    w.line(MAGIC, FORMAT_VERSION);
    w.line("tool", &cert.tool);
    w.line("kind", cert.body.kind());
    w.line("prime", cert.p);
    match &cert.body {
        Body::Free { alphabet, root } => {
            w.line("alphabet", alphabet.names().join(" "));
            emit_node(&mut w, root, "root", alphabet);
        }
        Body::DoubleCoset { n, g, h, target, images, modulus } => {
            let a = Alphabet::surface(*n, false);
            w.line("n", n);
            w.line("g", a.format(g));
            w.line("h", a.format(h));
            w.images("image", target, images);
            w.line("modulus", modulus);
        }
        Body::Surface { n, g, h, factors, gamma_order } => {
            let a = surface_alphabet(*n);
            w.line("n", n);
            w.line("g", a.format(g));
            w.line("h", a.format(h));
            w.images("image1", &factors[0].target, &factors[0].images);
            w.images("image2", &factors[1].target, &factors[1].images);
            w.line("gamma-order", gamma_order);
        }
    }
    w.line("verification", cert.record.mode.name());
    w.line("cap", cert.record.cap);
    w.line("outcome", &cert.record.outcome);
    w.out.push_str("end\n");
    w.out
}

fn emit_node(w: &mut Writer, node: &FreeNode, path: &str, alphabet: &Alphabet) {
    w.line("node", path);
    w.line("rank", node.rank);
    w.line("step", node.step.name());
    w.line("g", alphabet.format(&node.g));
    w.line("h", alphabet.format(&node.h));
    w.images("image", &node.target, &node.images);
    match &node.lift {
        None => w.line("children", 0),
        Some(lift) => {
            let values: Vec<String> = lift.mu.values().iter().map(u64::to_string).collect();
            w.line("mu", format!("{} {}", lift.mu.modulus(), values.join(" ")));
            w.line("designated", lift.mu.designated() + 1);
            w.line("swapped", if lift.swapped { "yes" } else { "no" });
            w.line("i0", lift.i0);
            w.line("children", lift.children.len());
            for (i, c) in lift.children.iter().enumerate() {
                let sub = Alphabet::indexed("s", c.rank.max(1));
                emit_node(w, c, &format!("{path}.{i}"), &sub);
            }
        }
    }
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, msg: msg.into() }
    }

    /// Value of the next line, which must have the given key.
    fn take(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let line = self.pos + 1;
        let Some(text) = self.lines.get(self.pos) else {
            return Err(self.err(line, format!("unexpected end of file, expected `{key}`")));
        };
        self.pos += 1;
        let (k, v) = text.split_once(' ').unwrap_or((text, ""));
        if k != key {
            return Err(self.err(line, format!("expected `{key}`, found `{k}`")));
        }
        Ok((line, v))
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, v) = self.take(key)?;
        v.parse().map_err(|_| self.err(line, format!("`{key}` expects a number, found {v:?}")))
    }

    fn word(&mut self, key: &str, alphabet: &Alphabet) -> Result<Word> {
        let (line, v) = self.take(key)?;
        alphabet.parse(v).map_err(|e| self.err(line, e.to_string()))
    }

    fn group(&mut self, key: &str, p: u32) -> Result<GroupExpr> {
        let (line, v) = self.take(key)?;
        parse_group(v, p).map_err(|e| self.err(line, e.to_string()))
    }

    fn images(&mut self, key: &str, p: u32, count: usize) -> Result<FactorImages> {
        let target = self.group(&format!("target{}", &key[5..]), p)?;
        let mut images = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, v) = self.take(key)?;
            images.push(parse_element(&target, v).map_err(|e| self.err(line, e.to_string()))?);
        }
        Ok(FactorImages { target, images })
    }
}

pub fn parse(text: &str) -> Result<Certificate> {
    let mut r = Reader { lines: text.lines().collect(), pos: 0 };
    let version: u32 = r.num(MAGIC)?;
    if version != FORMAT_VERSION {
        return Err(r.err(1, format!("unsupported format version {version}")));
    }
    let tool = r.take("tool")?.1.to_string();
    let (kind_line, kind) = r.take("kind")?;
    let p: u32 = r.num("prime")?;
    let body = match kind {
        "free-separation" => {
            let (line, names) = r.take("alphabet")?;
            let alphabet = Alphabet::new(names.split(' ')).map_err(|e| r.err(line, e.to_string()))?;
            let root = parse_node(&mut r, p, "root", &alphabet)?;
            if root.rank != alphabet.rank() {
                return Err(r.err(line, "alphabet rank differs from the root rank"));
            }
            Body::Free { alphabet, root }
        }
        "double-coset" => {
            let n: usize = r.num("n")?;
            let a = Alphabet::surface(n.max(1), false);
            let g = r.word("g", &a)?;
            let h = r.word("h", &a)?;
            let FactorImages { target, images } = r.images("image", p, 2 * n)?;
            let modulus = r.num("modulus")?;
            Body::DoubleCoset { n, g, h, target, images, modulus }
        }
        "surface-separation" => {
            let n: usize = r.num("n")?;
            let a = surface_alphabet(n.max(1));
            let g = r.word("g", &a)?;
            let h = r.word("h", &a)?;
            let f1 = r.images("image1", p, 2 * n)?;
            let f2 = r.images("image2", p, 2 * n)?;
            let gamma_order = r.num("gamma-order")?;
            Body::Surface { n, g, h, factors: [f1, f2], gamma_order }
        }
        other => return Err(r.err(kind_line, format!("unknown certificate kind {other:?}"))),
    };
    let (line, mode) = r.take("verification")?;
    let mode = VerifyMode::parse(mode).ok_or_else(|| r.err(line, format!("unknown verification mode {mode:?}")))?;
    let cap = r.num("cap")?;
    let outcome = r.take("outcome")?.1.to_string();
    let (line, rest) = r.take("end")?;
    if !rest.is_empty() || r.pos != r.lines.len() {
        return Err(r.err(line, "trailing content after `end`"));
    }
    Ok(Certificate { tool, p, body, record: Record { mode, cap, outcome } })
}

fn parse_node(r: &mut Reader, p: u32, path: &str, alphabet: &Alphabet) -> Result<FreeNode> {
    let (line, got) = r.take("node")?;
    if got != path {
        return Err(r.err(line, format!("expected node {path}, found {got}")));
    }
    let rank: usize = r.num("rank")?;
    let (line, step) = r.take("step")?;
    let step = FreeStep::parse(step).ok_or_else(|| r.err(line, format!("unknown step {step:?}")))?;
    let g = r.word("g", alphabet)?;
    let h = r.word("h", alphabet)?;
    let FactorImages { target, images } = r.images("image", p, rank)?;
    let lift = if step == FreeStep::Induced {
        let (line, mu) = r.take("mu")?;
        let nums: Vec<u64> = mu
            .split(' ')
            .map(|t| t.parse().map_err(|_| r.err(line, format!("bad number {t:?} in `mu`"))))
            .collect::<Result<_>>()?;
        let (line2, d) = r.take("designated")?;
        let d: u32 = d.parse().map_err(|_| r.err(line2, "bad designated generator"))?;
        let (&modulus, values) = nums.split_first().ok_or_else(|| r.err(line, "empty `mu`"))?;
        let mu =
            ExponentHom::new(modulus, values.to_vec(), d.wrapping_sub(1)).map_err(|e| r.err(line, e.to_string()))?;
        let (line, sw) = r.take("swapped")?;
        let swapped = match sw {
            "yes" => true,
            "no" => false,
            _ => return Err(r.err(line, format!("`swapped` expects yes or no, found {sw:?}"))),
        };
        let i0 = r.num("i0")?;
        let count: usize = r.num("children")?;
        let mut children = Vec::with_capacity(count);
        for i in 0..count {
            // child ranks are only known from their own `rank` line
            let save = r.pos;
            r.take("node")?;
            let child_rank: usize = r.num("rank")?;
            r.pos = save;
            let sub = Alphabet::indexed("s", child_rank.max(1));
            children.push(parse_node(r, p, &format!("{path}.{i}"), &sub)?);
        }
        Some(FreeLift { mu, swapped, i0, children })
    } else {
        let (line, c) = r.take("children")?;
        if c != "0" {
            return Err(r.err(line, "only induced nodes have children"));
        }
        None
    };
    Ok(FreeNode { rank, g, h, step, target, images, lift })
}
