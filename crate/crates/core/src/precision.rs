//! Equality of real-valued invariants at a fixed number of significant
//! digits.

/// Decimal rendering of `x` rounded to `digits` significant digits. Two
/// values are considered equal at `digits` iff their keys match.
pub fn significant_key(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if x == 0.0 {
        // -0.0 and 0.0 share a key
        return format!("{:.*e}", digits - 1, 0.0);
    }
    format!("{:.*e}", digits - 1, x)
}

pub fn equal_at(a: f64, b: f64, digits: usize) -> bool {
    significant_key(a, digits) == significant_key(b, digits)
}

/// How two values relate under a working digit count and a coarser
/// digit count used to flag near misses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agreement {
    /// Equal at the working digit count.
    Equal,
    /// Distinct at the working digit count but equal at the coarser one.
    PrecisionSuspect,
    Distinct,
}

impl Agreement {
    pub fn label(self) -> &'static str {
        match self {
            Agreement::Equal => "collision",
            Agreement::PrecisionSuspect => "precision-suspect",
            Agreement::Distinct => "distinct",
        }
    }
}

/// Comparison policy: `digits` decides equality, `suspect_digits`
/// (smaller) marks distinct values that are uncomfortably close.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitPolicy {
    pub digits: usize,
    pub suspect_digits: usize,
}

impl Default for DigitPolicy {
    fn default() -> Self {
        DigitPolicy {
            digits: 9,
            suspect_digits: 8,
        }
    }
}

impl DigitPolicy {
    pub fn new(digits: usize, suspect_digits: usize) -> Self {
        assert!(
            suspect_digits >= 1 && suspect_digits <= digits,
            "suspect digit count must lie in 1..=digits"
        );
        DigitPolicy {
            digits,
            suspect_digits,
        }
    }

    pub fn compare(&self, a: f64, b: f64) -> Agreement {
        if equal_at(a, b, self.digits) {
            Agreement::Equal
        } else if equal_at(a, b, self.suspect_digits) {
            Agreement::PrecisionSuspect
        } else {
            Agreement::Distinct
        }
    }
}

/// Two inputs whose values are close, indexed into the scanned slice with
/// `first < second`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearPair {
    pub first: usize,
    pub second: usize,
    pub delta: f64,
    pub agreement: Agreement,
}

/// Result of scanning a batch of values for equal and nearly equal pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairScan {
    /// All pairs equal at the working digit count.
    pub collisions: Vec<NearPair>,
    /// All pairs distinct at the working digit count but equal at the
    /// suspect digit count.
    pub suspects: Vec<NearPair>,
    /// The `limit` smallest gaps between neighbours in sorted order.
    pub nearest: Vec<NearPair>,
}

fn runs_by_key(order: &[usize], values: &[f64], digits: usize) -> Vec<Vec<usize>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut last_key: Option<String> = None;
    for &i in order {
        let key = significant_key(values[i], digits);
        if last_key.as_ref() == Some(&key) {
            runs.last_mut().expect("a run is open").push(i);
        } else {
            runs.push(vec![i]);
            last_key = Some(key);
        }
    }
    runs
}

fn make_pair(a: usize, b: usize, values: &[f64], agreement: Agreement) -> NearPair {
    NearPair {
        first: a.min(b),
        second: a.max(b),
        delta: (values[a] - values[b]).abs(),
        agreement,
    }
}

impl DigitPolicy {
    /// Finds every collision and precision-suspect pair among `values`
    /// (non-finite values are skipped) plus the `limit` nearest neighbours
    /// in sorted order.
    pub fn scan(&self, values: &[f64], limit: usize) -> PairScan {
        let mut order: Vec<usize> = (0..values.len())
            .filter(|&i| values[i].is_finite())
            .collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

        // Rounding is monotone, so equal keys are contiguous in sorted order.
        let mut scan = PairScan::default();
        for run in runs_by_key(&order, values, self.digits) {
            for (k, &a) in run.iter().enumerate() {
                for &b in &run[k + 1..] {
                    scan.collisions
                        .push(make_pair(a, b, values, Agreement::Equal));
                }
            }
        }
        for run in runs_by_key(&order, values, self.suspect_digits) {
            for (k, &a) in run.iter().enumerate() {
                for &b in &run[k + 1..] {
                    if self.compare(values[a], values[b]) == Agreement::PrecisionSuspect {
                        scan.suspects
                            .push(make_pair(a, b, values, Agreement::PrecisionSuspect));
                    }
                }
            }
        }

        let mut nearest: Vec<NearPair> = order
            .windows(2)
            .map(|w| make_pair(w[0], w[1], values, self.compare(values[w[0]], values[w[1]])))
            .collect();
        nearest.sort_by(|a, b| a.delta.total_cmp(&b.delta).then(a.first.cmp(&b.first)));
        nearest.truncate(limit);
        let by_index = |a: &NearPair, b: &NearPair| (a.first, a.second).cmp(&(b.first, b.second));
        scan.collisions.sort_by(by_index);
        scan.suspects.sort_by(by_index);
        scan.nearest = nearest;
        scan
    }
}
