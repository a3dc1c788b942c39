//! CSV dumps of fields: header `k1,...,kn,blade_mask,re,im`, one row per
//! nonzero (site, blade) in the valid region.

use std::io::{Read, Write};

use crate::clifford::{Multivector, Scalar};
use crate::error::{Error, Result};

use super::{Field, LatticeBox};

pub fn write_csv<W: Write>(field: &Field, writer: W) -> Result<()> {
    let n = field.n();
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=n).map(|j| format!("k{j}")).collect();
    header.extend(["blade_mask", "re", "im"].map(String::from));
    w.write_record(&header)?;
    for k in field.valid_sites() {
        for (mask, re, im) in field.value_at(&k).entries() {
            let mut row: Vec<String> = k.iter().map(i64::to_string).collect();
            row.push(mask.to_string());
            row.push(re.to_string());
            row.push(im.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump back onto `bx`. Sites without rows are zero; the whole box
/// is valid.
pub fn read_csv<R: Read>(reader: R, bx: &LatticeBox) -> Result<Field> {
    let n = bx.n();
    let sig = bx.value_signature();
    let mut values: Vec<Multivector> = vec![Multivector::zero(sig); bx.site_count()];
    let region = bx.full_region();
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.len() != n + 3 {
        return Err(Error::Parse(format!(
            "expected {} columns for n = {n}, got {}",
            n + 3,
            headers.len()
        )));
    }
    for record in r.records() {
        let record = record?;
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        let k = (0..n)
            .map(|i| {
                field(i)
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad site coordinate `{}`", field(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        if !region.contains(&k) {
            return Err(Error::Parse(format!("site {k:?} is outside the box")));
        }
        let mask: usize = field(n)
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad blade mask `{}`", field(n))))?;
        if mask >= sig.blade_count() {
            return Err(Error::Parse(format!("blade mask {mask} exceeds Cl({sig})")));
        }
        let num = |i: usize| -> Result<f64> {
            field(i)
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{}`", field(i))))
        };
        let value = Scalar::new(num(n + 1)?, num(n + 2)?);
        values[bx.index(&k)].coeffs_mut()[mask] += value;
    }
    Ok(Field::from_parts(bx.clone(), values, region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoundaryMode;
    use crate::sample::{random_field, rng};

    #[test]
    fn dump_and_load_agree() {
        let bx = LatticeBox::new(0.5, vec![-1, 0], vec![1, 2], BoundaryMode::Shrinking).unwrap();
        let f = random_field(&bx, &mut rng(11));
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k1,k2,blade_mask,re,im\n"));
        let g = read_csv(buf.as_slice(), &bx).unwrap();
        assert_eq!(g.max_abs_diff(&f).unwrap(), 0.0);
    }

    #[test]
    fn zero_entries_are_omitted() {
        let bx = LatticeBox::cube(1, 1.0, 0, 2, BoundaryMode::Shrinking).unwrap();
        let f = Field::zero(&bx);
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k1,blade_mask,re,im\n");
    }

    #[test]
    fn load_rejects_bad_rows() {
        let bx = LatticeBox::cube(1, 1.0, 0, 2, BoundaryMode::Shrinking).unwrap();
        assert!(read_csv("k1,blade_mask,re,im\n5,0,1,0\n".as_bytes(), &bx).is_err());
        assert!(read_csv("k1,blade_mask,re,im\n1,2,1,0\n".as_bytes(), &bx).is_err());
        assert!(read_csv("k1,k2,blade_mask,re,im\n".as_bytes(), &bx).is_err());
        assert!(read_csv("k1,blade_mask,re,im\n1,0,x,0\n".as_bytes(), &bx).is_err());
    }
}
