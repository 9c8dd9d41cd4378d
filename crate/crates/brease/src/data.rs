//! Data model and CSV ingestion for single and stratified binary experiments.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Read;

/// Observed counts of a binary experiment: adverse events and sizes per arm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialData {
    /// Adverse-event count in the control arm.
    pub y0: u64,
    /// Control arm size.
    pub n0: u64,
    /// Adverse-event count in the treatment arm.
    pub y1: u64,
    /// Treatment arm size.
    pub n1: u64,
}

impl TrialData {
    pub fn new(y0: u64, n0: u64, y1: u64, n1: u64) -> Result<Self> {
        let d = TrialData { y0, n0, y1, n1 };
        match d.violations() {
            v if v.is_empty() => Ok(d),
            v => Err(Error::validation(v.join("; "))),
        }
    }

    /// Total sample size across both arms.
    pub fn total(&self) -> u64 {
        self.n0 + self.n1
    }

    /// Every violated invariant, empty when the data are valid.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.y0 > self.n0 {
            v.push(format!("y0 > N0 ({} > {})", self.y0, self.n0));
        }
        if self.y1 > self.n1 {
            v.push(format!("y1 > N1 ({} > {})", self.y1, self.n1));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::validation(v.join("; ")))
        }
    }

    /// Swap the roles of the two arms.
    pub fn swap_arms(&self) -> TrialData {
        TrialData {
            y0: self.y1,
            n0: self.n1,
            y1: self.y0,
            n1: self.n0,
        }
    }

    /// Stable fingerprint of the counts (FNV-1a), used to guard against
    /// comparing evidence across different data sets.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in [self.y0, self.n0, self.y1, self.n1] {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x1000_0000_01b3);
            }
        }
        h
    }
}

/// A set of strata of one experiment, each with its own 2x2 counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratifiedTrialData {
    pub strata: Vec<(String, TrialData)>,
}

impl StratifiedTrialData {
    pub fn new(strata: Vec<(String, TrialData)>) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::validation("at least one stratum is required"));
        }
        let mut seen = std::collections::HashSet::new();
        for (label, d) in &strata {
            if !seen.insert(label.clone()) {
                return Err(Error::validation(format!("duplicate stratum label {label:?}")));
            }
            d.validate()?;
        }
        Ok(StratifiedTrialData { strata })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }
}

/// A corpus of independent studies (meta-analysis input).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyCorpus {
    pub studies: Vec<(String, TrialData)>,
}

impl StudyCorpus {
    pub fn new(studies: Vec<(String, TrialData)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (id, d) in &studies {
            if !seen.insert(id.clone()) {
                return Err(Error::validation(format!("duplicate study id {id:?}")));
            }
            d.validate()?;
        }
        Ok(StudyCorpus { studies })
    }
}

fn reader_for<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn parse_count(record: &csv::StringRecord, idx: usize, name: &str, line: usize) -> Result<u64> {
    let cell = record.get(idx).ok_or(Error::Parse {
        line,
        msg: format!("missing column {name}"),
    })?;
    cell.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("column {name}: {cell:?} is not a nonnegative integer"),
    })
}

fn parse_rows<R: Read>(input: R, label_col: &str) -> Result<Vec<(String, TrialData)>> {
    let mut rdr = reader_for(input);
    let hdr = rdr
        .headers()
        .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
        .clone();
    let want = [label_col, "y0", "N0", "y1", "N1"];
    let got: Vec<&str> = hdr.iter().collect();
    if got != want {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {:?}, got {:?}", want.join(","), got.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let label = rec
            .get(0)
            .ok_or(Error::Parse { line, msg: format!("missing {label_col}") })?
            .to_string();
        let y0 = parse_count(&rec, 1, "y0", line)?;
        let n0 = parse_count(&rec, 2, "N0", line)?;
        let y1 = parse_count(&rec, 3, "y1", line)?;
        let n1 = parse_count(&rec, 4, "N1", line)?;
        out.push((label, TrialData::new(y0, n0, y1, n1)?));
    }
    Ok(out)
}

/// Parse a study corpus from CSV with header `study,y0,N0,y1,N1`.
///
/// UTF-8, comma-separated; lines starting with `#` are ignored.
pub fn parse_trials<R: Read>(input: R) -> Result<StudyCorpus> {
    StudyCorpus::new(parse_rows(input, "study")?)
}

/// Parse stratified counts from CSV with header `stratum,y0,N0,y1,N1`.
pub fn parse_strata<R: Read>(input: R) -> Result<StratifiedTrialData> {
    StratifiedTrialData::new(parse_rows(input, "stratum")?)
}

/// Serialize a corpus back to the `study,y0,N0,y1,N1` schema.
pub fn serialize_trials(corpus: &StudyCorpus) -> String {
    let mut s = String::from("study,y0,N0,y1,N1\n");
    for (id, d) in &corpus.studies {
        s.push_str(&format!("{},{},{},{},{}\n", id, d.y0, d.n0, d.y1, d.n1));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_known_studies() {
        let csv = "study,y0,N0,y1,N1\nphs,26,11034,10,11037\nc19,169,20172,9,19965\n";
        let c = parse_trials(csv.as_bytes()).unwrap();
        assert_eq!(c.studies[0].1, TrialData { y0: 26, n0: 11034, y1: 10, n1: 11037 });
        assert_eq!(c.studies[1].1, TrialData { y0: 169, n0: 20172, y1: 9, n1: 19965 });
    }

    #[test]
    fn rejects_negative_and_reports_line() {
        let csv = "study,y0,N0,y1,N1\nbad,-1,10,0,10\n";
        match parse_trials(csv.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_count_violation() {
        let csv = "study,y0,N0,y1,N1\nbad,11,10,0,10\n";
        assert!(matches!(parse_trials(csv.as_bytes()), Err(Error::Validation(_))));
    }

    #[test]
    fn ignores_comments_and_checks_header() {
        let csv = "# a comment\nstudy,y0,N0,y1,N1\n# another\nx,1,2,1,2\n";
        assert_eq!(parse_trials(csv.as_bytes()).unwrap().studies.len(), 1);
        assert!(parse_trials("a,b\n".as_bytes()).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(TrialData::new(0, 0, 0, 0).is_ok());
        let v = TrialData { y0: 5, n0: 3, y1: 0, n1: 1 }.violations();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("y0 > N0"));
        assert!(TrialData::new(20, 1000, 40, 1000).is_ok());
    }

    #[test]
    fn strata_need_unique_labels() {
        let d = TrialData::new(1, 2, 1, 2).unwrap();
        assert!(StratifiedTrialData::new(vec![("a".into(), d), ("a".into(), d)]).is_err());
        assert!(StratifiedTrialData::new(vec![]).is_err());
        let csv = "stratum,y0,N0,y1,N1\n75+,5,785,0,774\n";
        let s = parse_strata(csv.as_bytes()).unwrap();
        assert_eq!(s.strata[0].0, "75+");
    }

    proptest! {
        #[test]
        fn parse_serialize_round_trip(
            rows in proptest::collection::vec((0u64..500, 0u64..500, 0u64..500, 0u64..500), 1..20)
        ) {
            let studies: Vec<(String, TrialData)> = rows
                .iter()
                .enumerate()
                .map(|(i, &(y0, dn0, y1, dn1))| {
                    (format!("s{i}"), TrialData { y0, n0: y0 + dn0, y1, n1: y1 + dn1 })
                })
                .collect();
            let corpus = StudyCorpus::new(studies).unwrap();
            let text = serialize_trials(&corpus);
            let back = parse_trials(text.as_bytes()).unwrap();
            prop_assert_eq!(back, corpus);
        }
    }
}
