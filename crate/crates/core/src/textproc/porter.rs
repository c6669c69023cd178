//! Porter (1980) suffix stripper, all five steps, as published.
//!
//! No short-word guard: the original rule set applies to every input, so
//! degenerate inputs like "s" can stem to the empty string. Callers that
//! need non-empty surfaces drop empty stems (see `features::preprocess`).
//!
//! Within each rule block the longest matching suffix is selected first;
//! if its condition fails, no other rule of that block is attempted.

/// A letter is a consonant unless it is a/e/i/o/u, or a y preceded by a
/// consonant (word-initial y is a consonant).
fn is_cons(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_cons(w, i - 1),
        _ => true,
    }
}

/// The measure m of a stem: the number of vowel-to-consonant transitions,
/// i.e. m in the decomposition [C](VC)^m[V].
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let vowel = !is_cons(w, i);
        if prev_vowel && !vowel {
            m += 1;
        }
        prev_vowel = vowel;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_cons(w, i))
}

/// *d: ends with a doubled consonant.
fn ends_double_cons(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_cons(w, n - 1)
}

/// *o: ends consonant-vowel-consonant where the final consonant is not
/// w, x, or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_cons(w, n - 3)
        && !is_cons(w, n - 2)
        && is_cons(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends(w: &[u8], suffix: &[u8]) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix
}

fn stem_of<'a>(w: &'a [u8], suffix: &[u8]) -> &'a [u8] {
    &w[..w.len() - suffix.len()]
}

fn step1a(w: &mut Vec<u8>) {
    if ends(w, b"sses") {
        w.truncate(w.len() - 2);
    } else if ends(w, b"ies") {
        w.truncate(w.len() - 2);
    } else if ends(w, b"ss") {
        // unchanged
    } else if ends(w, b"s") {
        w.pop();
    }
}

fn step1b(w: &mut Vec<u8>) {
    if ends(w, b"eed") {
        // longest match; a failed condition ends the block without
        // falling through to the ED rule
        if measure(stem_of(w, b"eed")) > 0 {
            w.pop();
        }
        return;
    }
    let deleted = if ends(w, b"ed") && has_vowel(stem_of(w, b"ed")) {
        w.truncate(w.len() - 2);
        true
    } else if ends(w, b"ing") && has_vowel(stem_of(w, b"ing")) {
        w.truncate(w.len() - 3);
        true
    } else {
        false
    };
    if deleted {
        if ends(w, b"at") || ends(w, b"bl") || ends(w, b"iz") {
            w.push(b'e');
        } else if ends_double_cons(w) && !matches!(w.last(), Some(b'l' | b's' | b'z')) {
            w.pop();
        } else if measure(w) == 1 && ends_cvc(w) {
            w.push(b'e');
        }
    }
}

fn step1c(w: &mut Vec<u8>) {
    if ends(w, b"y") && has_vowel(stem_of(w, b"y")) {
        let n = w.len();
        w[n - 1] = b'i';
    }
}

// (S1, S2) pairs ordered longest-S1-first within each step so the first
// suffix hit is the longest match.
const STEP2: &[(&[u8], &[u8])] = &[
    (b"ational", b"ate"),
    (b"ization", b"ize"),
    (b"iveness", b"ive"),
    (b"fulness", b"ful"),
    (b"ousness", b"ous"),
    (b"tional", b"tion"),
    (b"biliti", b"ble"),
    (b"entli", b"ent"),
    (b"ousli", b"ous"),
    (b"ation", b"ate"),
    (b"alism", b"al"),
    (b"aliti", b"al"),
    (b"iviti", b"ive"),
    (b"enci", b"ence"),
    (b"anci", b"ance"),
    (b"izer", b"ize"),
    (b"abli", b"able"),
    (b"alli", b"al"),
    (b"ator", b"ate"),
    (b"eli", b"e"),
];

const STEP3: &[(&[u8], &[u8])] = &[
    (b"icate", b"ic"),
    (b"ative", b""),
    (b"alize", b"al"),
    (b"iciti", b"ic"),
    (b"ical", b"ic"),
    (b"ness", b""),
    (b"ful", b""),
];

const STEP4: &[&[u8]] = &[
    b"ement",
    b"ance",
    b"ence",
    b"able",
    b"ible",
    b"ment",
    b"ant",
    b"ent",
    b"ion",
    b"ism",
    b"ate",
    b"iti",
    b"ous",
    b"ive",
    b"ize",
    b"al",
    b"er",
    b"ic",
    b"ou",
];

fn apply_table(w: &mut Vec<u8>, table: &[(&[u8], &[u8])]) {
    for (s1, s2) in table {
        if ends(w, s1) {
            if measure(stem_of(w, s1)) > 0 {
                w.truncate(w.len() - s1.len());
                w.extend_from_slice(s2);
            }
            return;
        }
    }
}

fn step2(w: &mut Vec<u8>) {
    apply_table(w, STEP2);
}

fn step3(w: &mut Vec<u8>) {
    apply_table(w, STEP3);
}

fn step4(w: &mut Vec<u8>) {
    for s1 in STEP4 {
        if ends(w, s1) {
            let stem = stem_of(w, s1);
            let take = if *s1 == b"ion" {
                measure(stem) > 1 && matches!(stem.last(), Some(b's' | b't'))
            } else {
                measure(stem) > 1
            };
            if take {
                w.truncate(w.len() - s1.len());
            }
            return;
        }
    }
}

fn step5a(w: &mut Vec<u8>) {
    if ends(w, b"e") {
        let stem = stem_of(w, b"e");
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.pop();
        }
    }
}

fn step5b(w: &mut Vec<u8>) {
    if measure(w) > 1 && ends_double_cons(w) && w.last() == Some(&b'l') {
        w.pop();
    }
}

/// Stems a lowercase word. Inputs containing anything outside a-z (gene
/// symbols like `p53`, already-normalized digits) are returned unchanged.
pub fn stem(word: &str) -> String {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = word.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    String::from_utf8(w).expect("stemming preserves ascii")
}
