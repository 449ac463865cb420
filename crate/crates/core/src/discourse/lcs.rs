/// Length of the longest common subsequence of two strings, compared by
/// character, using the Wagner–Fischer table with a single rolling row.
pub fn lcs_length(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row = vec![0usize; b.len() + 1];
    for ca in &a {
        // row[j] holds the previous row until overwritten; diag is prev[j-1]
        let mut diag = 0;
        for (j, cb) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ca == cb { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(lcs_length("abacbba", "bcda"), 3);
        assert_eq!(lcs_length("日本航空", "日航"), 2);
        assert_eq!(lcs_length("新日本製鉄", "新日鉄"), 3);
        assert_eq!(lcs_length("", "abc"), 0);
        assert_eq!(lcs_length("abc", "abc"), 3);
        assert_eq!(lcs_length("X商事", "Y銀行"), 0);
    }
}
