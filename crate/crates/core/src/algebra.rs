//! Finite algebras given by operation tables.
//!
//! The universe of an algebra of size `n` is always `{0, .., n-1}`. An
//! operation of arity `r` is a flat table of `n^r` entries in row-major order
//! with the leftmost argument varying slowest.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::lattice::{self, Partition};

/// An element of a finite algebra.
pub type Elem = u8;

/// A tuple of elements, one entry per coordinate of a power `A^k`.
pub type ElementTuple = Vec<Elem>;

/// Largest universe an algebra may have; elements are stored as bytes.
pub const MAX_SIZE: usize = 256;

/// Ordered list of operation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        for (i, (name, _)) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidArgument(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn has_constants(&self) -> bool {
        self.symbols.iter().any(|&(_, arity)| arity == 0)
    }
}

/// A single basic operation: symbol, arity and value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    name: String,
    arity: usize,
    table: Vec<Elem>,
    strides: Vec<usize>,
}

impl Operation {
    fn new(name: String, arity: usize, size: usize, table: Vec<Elem>) -> Self {
        let strides = (0..arity)
            .map(|p| size.pow((arity - 1 - p) as u32))
            .collect();
        Operation {
            name,
            arity,
            table,
            strides,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Weight of each argument position in the row-major table index.
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Table lookup without range checks beyond the slice bounds.
    #[inline]
    pub fn apply(&self, args: &[Elem]) -> Elem {
        let mut index = 0;
        for (&arg, &stride) in args.iter().zip(&self.strides) {
            index += arg as usize * stride;
        }
        self.table[index]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    /// Builds an algebra from `(symbol, arity, table)` triples, validating
    /// table lengths and entries.
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<(String, usize, Vec<Elem>)>,
    ) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::InvalidArgument(format!(
                "algebra size must lie in 1..={MAX_SIZE}, got {size}"
            )));
        }
        Signature::new(ops.iter().map(|(n, a, _)| (n.clone(), *a)).collect())?;
        let mut built = Vec::with_capacity(ops.len());
        for (symbol, arity, table) in ops {
            let expected = table_len(size, arity)?;
            if table.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "table for `{symbol}` has {} entries, expected {expected}",
                    table.len()
                )));
            }
            if let Some(&bad) = table.iter().find(|&&v| v as usize >= size) {
                return Err(Error::ElementOutOfRange {
                    value: bad as usize,
                    size,
                });
            }
            built.push(Operation::new(symbol, arity, size, table));
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            ops: built,
        })
    }

    /// Builds an algebra by evaluating `f(op_index, args)` on every argument
    /// tuple of every operation.
    pub fn from_fn(
        name: impl Into<String>,
        size: usize,
        signature: &[(&str, usize)],
        mut f: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<Self> {
        let mut ops = Vec::with_capacity(signature.len());
        for (index, &(symbol, arity)) in signature.iter().enumerate() {
            let len = table_len(size, arity)?;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0 as Elem; arity];
            for _ in 0..len {
                table.push(f(index, &args));
                increment(&mut args, size);
            }
            ops.push((symbol.to_string(), arity, table));
        }
        FiniteAlgebra::new(name, size, ops)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn signature(&self) -> Signature {
        Signature {
            symbols: self
                .ops
                .iter()
                .map(|op| (op.name.clone(), op.arity))
                .collect(),
        }
    }

    pub fn op(&self, symbol: &str) -> Result<&Operation> {
        self.ops
            .iter()
            .find(|op| op.name == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.name == symbol)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn universe(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(|e| e as Elem)
    }

    pub fn eval_op(&self, symbol: &str, args: &[Elem]) -> Result<Elem> {
        let op = self.op(symbol)?;
        if args.len() != op.arity {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: op.arity,
                found: args.len(),
            });
        }
        self.check_elements(args)?;
        Ok(op.apply(args))
    }

    /// Applies `symbol` coordinatewise to tuples of a common arity.
    pub fn eval_componentwise(&self, symbol: &str, args: &[&[Elem]]) -> Result<ElementTuple> {
        let op = self.op(symbol)?;
        if args.len() != op.arity {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: op.arity,
                found: args.len(),
            });
        }
        // A nullary operation on a power has no arity to borrow from the
        // arguments; callers use `constant_tuple` instead.
        let k = match args.first() {
            Some(first) => first.len(),
            None => return Ok(vec![op.apply(&[])]),
        };
        if args.iter().any(|t| t.len() != k) {
            return Err(Error::MixedArity);
        }
        for t in args {
            self.check_elements(t)?;
        }
        let mut column = vec![0 as Elem; op.arity];
        Ok((0..k)
            .map(|i| {
                for (slot, t) in column.iter_mut().zip(args) {
                    *slot = t[i];
                }
                op.apply(&column)
            })
            .collect())
    }

    fn check_elements(&self, args: &[Elem]) -> Result<()> {
        match args.iter().find(|&&a| a as usize >= self.size) {
            Some(&bad) => Err(Error::ElementOutOfRange {
                value: bad as usize,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    /// Quotient by a congruence; classes are re-indexed by ascending minimal
    /// representative.
    pub fn quotient(&self, theta: &Partition) -> Result<FiniteAlgebra> {
        if !lattice::is_congruence(self, theta)? {
            return Err(Error::NotCongruence);
        }
        let reps = theta.representatives();
        let mut class_of = vec![0 as Elem; self.size];
        for (e, class) in class_of.iter_mut().enumerate() {
            *class = reps
                .binary_search(&theta.block_id(e))
                .expect("representative") as Elem;
        }
        let m = reps.len();
        let signature: Vec<(&str, usize)> = self
            .ops
            .iter()
            .map(|op| (op.name.as_str(), op.arity))
            .collect();
        let mut lifted = Vec::new();
        FiniteAlgebra::from_fn(format!("{}/theta", self.name), m, &signature, |i, args| {
            lifted.clear();
            lifted.extend(args.iter().map(|&c| reps[c as usize] as Elem));
            class_of[self.ops[i].apply(&lifted) as usize]
        })
    }

    /// Direct product over a shared signature; the pair `(a, b)` is encoded
    /// as `a * |B| + b`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.signature() != other.signature() {
            return Err(Error::Incompatible("signatures differ".into()));
        }
        let m = other.size;
        let size = self.size * m;
        let signature: Vec<(&str, usize)> = self
            .ops
            .iter()
            .map(|op| (op.name.as_str(), op.arity))
            .collect();
        let mut left = Vec::new();
        let mut right = Vec::new();
        FiniteAlgebra::from_fn(
            format!("{}x{}", self.name, other.name),
            size,
            &signature,
            |i, args| {
                left.clear();
                right.clear();
                for &a in args {
                    left.push((a as usize / m) as Elem);
                    right.push((a as usize % m) as Elem);
                }
                let l = self.ops[i].apply(&left) as usize;
                let r = other.ops[i].apply(&right) as usize;
                (l * m + r) as Elem
            },
        )
    }

    /// Writes the algebra in the line-oriented text format.
    pub fn serialize(&self) -> String {
        let mut out = format!("algebra {}\nsize {}\n", self.name, self.size);
        for op in &self.ops {
            out.push_str(&format!("op {} {}\n", op.name, op.arity));
            let row = if op.arity == 0 { 1 } else { self.size };
            for chunk in op.table.chunks(row) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for FiniteAlgebra {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_algebra(s)
    }
}

fn table_len(size: usize, arity: usize) -> Result<usize> {
    size.checked_pow(arity as u32)
        .filter(|&len| len <= 1 << 24)
        .ok_or(Error::TooLarge {
            what: "operation table",
            size,
            bound: 1 << 24,
        })
}

/// Odometer step over `{0..n-1}^r`, last position fastest.
pub(crate) fn increment(args: &mut [Elem], n: usize) -> bool {
    for slot in args.iter_mut().rev() {
        if (*slot as usize) + 1 < n {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Parses the algebra text format. Tables may span several lines.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, ParseError> {
    let err = |line: usize, kind: ParseErrorKind| ParseError { line, kind };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or_else(|| {
        err(
            1,
            ParseErrorKind::UnexpectedEof("missing `algebra` header".into()),
        )
    })?;
    let name = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["algebra", name] => name.to_string(),
        _ => {
            return Err(err(
                line_no,
                ParseErrorKind::MalformedHeader(format!(
                    "expected `algebra <name>`, got `{header}`"
                )),
            ))
        }
    };

    let (line_no, size_line) = lines.next().ok_or_else(|| {
        err(
            line_no,
            ParseErrorKind::UnexpectedEof("missing `size` line".into()),
        )
    })?;
    let size = match size_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["size", n] => n
            .parse::<usize>()
            .ok()
            .filter(|&n| (1..=MAX_SIZE).contains(&n)),
        _ => None,
    }
    .ok_or_else(|| {
        err(
            line_no,
            ParseErrorKind::MalformedHeader(format!(
                "expected `size <n>` with 1 <= n <= {MAX_SIZE}, got `{size_line}`"
            )),
        )
    })?;

    let mut ops: Vec<(String, usize, Vec<Elem>)> = Vec::new();
    let mut current: Option<(usize, String, usize, Vec<Elem>)> = None;
    let mut last_line = line_no;

    let finish = |op: (usize, String, usize, Vec<Elem>),
                  ops: &mut Vec<(String, usize, Vec<Elem>)>,
                  at: usize|
     -> Result<(), ParseError> {
        let (_, symbol, arity, table) = op;
        let expected = size.pow(arity as u32);
        if table.len() != expected {
            return Err(err(
                at,
                ParseErrorKind::WrongTableLength {
                    symbol,
                    expected,
                    found: table.len(),
                },
            ));
        }
        ops.push((symbol, arity, table));
        Ok(())
    };

    for (line_no, line) in lines {
        last_line = line_no;
        if line.starts_with("op ") || line == "op" {
            if let Some(op) = current.take() {
                finish(op, &mut ops, line_no)?;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (symbol, arity) = match parts.as_slice() {
                ["op", symbol, arity] => match arity.parse::<usize>() {
                    Ok(a) if size.checked_pow(a as u32).is_some_and(|l| l <= 1 << 24) => {
                        (symbol.to_string(), a)
                    }
                    _ => {
                        return Err(err(
                            line_no,
                            ParseErrorKind::MalformedHeader(format!("bad arity in `{line}`")),
                        ))
                    }
                },
                _ => {
                    return Err(err(
                        line_no,
                        ParseErrorKind::MalformedHeader(format!(
                            "expected `op <name> <arity>`, got `{line}`"
                        )),
                    ))
                }
            };
            if ops.iter().any(|(s, _, _)| *s == symbol) {
                return Err(err(line_no, ParseErrorKind::DuplicateSymbol(symbol)));
            }
            current = Some((line_no, symbol, arity, Vec::new()));
            continue;
        }
        let Some((_, symbol, arity, table)) = current.as_mut() else {
            return Err(err(
                line_no,
                ParseErrorKind::MalformedHeader(format!(
                    "table data outside an op block: `{line}`"
                )),
            ));
        };
        let expected = size.pow(*arity as u32);
        for token in line.split_whitespace() {
            let value = token
                .parse::<usize>()
                .ok()
                .filter(|&v| v < size)
                .ok_or_else(|| {
                    err(
                        line_no,
                        ParseErrorKind::OutOfRange {
                            value: token.to_string(),
                            size,
                        },
                    )
                })?;
            if table.len() == expected {
                return Err(err(
                    line_no,
                    ParseErrorKind::WrongTableLength {
                        symbol: symbol.clone(),
                        expected,
                        found: expected + 1,
                    },
                ));
            }
            table.push(value as Elem);
        }
    }
    if let Some(op) = current.take() {
        finish(op, &mut ops, last_line)?;
    }
    Ok(FiniteAlgebra::new(name, size, ops).expect("parser validated tables"))
}

pub fn serialize_algebra(a: &FiniteAlgebra) -> String {
    a.serialize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;

    #[test]
    fn parses_singleton() {
        let a = parse_algebra("algebra One\nsize 1\nop c 0\n0").unwrap();
        assert_eq!(a.size(), 1);
        assert_eq!(a.eval_op("c", &[]).unwrap(), 0);
    }

    #[test]
    fn z6_expansion_round_trips() {
        let a = builtin("paper-z6").unwrap();
        let text = a.serialize();
        let b = parse_algebra(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.op("s").unwrap().table(), &[0, 3, 3, 0, 3, 3]);
        assert_eq!(b.eval_op("c", &[]).unwrap(), 3);
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let text = "algebra Bad\nsize 6\nop s 1\n0 3 3 6 3 3\n";
        let e = parse_algebra(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::OutOfRange { .. }));
    }

    #[test]
    fn rejects_short_table_and_bad_header() {
        let e = parse_algebra("algebra X\nsize 2\nop f 2\n0 1 1\n").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::WrongTableLength { found: 3, .. }
        ));
        let e = parse_algebra("# comment\nalgebra\nsize 2\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_algebra("algebra X\nsize zero\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::MalformedHeader(_)));
        let e = parse_algebra("algebra X\nsize 2\nop f 1\n0 1\nop f 1\n1 0\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DuplicateSymbol(_)));
    }

    #[test]
    fn table_lookups() {
        let a = builtin("paper-z6").unwrap();
        assert_eq!(a.eval_op("s", &[2]).unwrap(), 3);
        assert_eq!(a.eval_op("+", &[5, 1]).unwrap(), 0);
        assert!(matches!(a.eval_op("*", &[1]), Err(Error::UnknownSymbol(_))));
        assert!(matches!(
            a.eval_op("+", &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn componentwise() {
        let a = builtin("paper-z6").unwrap();
        assert_eq!(a.eval_componentwise("s", &[&[1, 4]]).unwrap(), vec![3, 3]);
        assert_eq!(
            a.eval_componentwise("+", &[&[0, 3], &[3, 3]]).unwrap(),
            vec![3, 0]
        );
        assert_eq!(
            a.eval_componentwise("+", &[&[0, 3], &[3]]),
            Err(Error::MixedArity)
        );
        assert_eq!(
            a.eval_componentwise("+", &[&[2, 2, 2], &[5, 5, 5]])
                .unwrap(),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn quotients() {
        let a = builtin("paper-z6").unwrap();
        let theta: Partition = "0 3|1 4|2 5".parse().unwrap();
        let q = a.quotient(&theta).unwrap();
        assert_eq!(q.size(), 3);
        for x in 0..3u8 {
            for y in 0..3u8 {
                assert_eq!(q.eval_op("+", &[x, y]).unwrap(), (x + y) % 3);
            }
        }
        let same = a.quotient(&Partition::zero(6)).unwrap();
        assert_eq!(same.ops(), a.ops());
        assert_eq!(a.quotient(&Partition::one(6)).unwrap().size(), 1);
        let bad: Partition = "0 1|2 3|4 5".parse().unwrap();
        assert_eq!(a.quotient(&bad), Err(Error::NotCongruence));
    }
}
