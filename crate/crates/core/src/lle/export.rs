use std::io;

use nalgebra::DMatrix;

use super::{Embedding, LleError};
use crate::imgseq::{ImageSet, Provenance};

/// Embedding rows as read back from CSV, with their point labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub provenance: Vec<Provenance>,
    pub yaw: Vec<Option<f64>>,
    pub coords: DMatrix<f64>,
}

/// Writes `index,provenance,yaw,e1,e2,...`; values use the shortest exact decimal form.
pub fn write_embedding_csv<W: io::Write>(out: W, emb: &Embedding, set: &ImageSet) -> Result<(), LleError> {
    if emb.n() != set.len() {
        return Err(LleError::SizeMismatch {
            expected: set.len(),
            actual: emb.n(),
        });
    }
    let csv_err = |e: csv::Error| LleError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["index".to_string(), "provenance".into(), "yaw".into()];
    header.extend((1..=emb.dim()).map(|c| format!("e{c}")));
    w.write_record(&header).map_err(csv_err)?;
    for (i, p) in set.points().iter().enumerate() {
        let mut rec = vec![
            i.to_string(),
            p.provenance.as_str().to_string(),
            p.yaw.map(|y| y.to_string()).unwrap_or_default(),
        ];
        rec.extend((0..emb.dim()).map(|c| emb.get(i, c).to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| LleError::Csv(e.to_string()))?;
    Ok(())
}

pub fn read_embedding_csv<R: io::Read>(input: R) -> Result<EmbeddingTable, LleError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| LleError::Csv(e.to_string()))?.clone();
    let dim = header.len().saturating_sub(3);
    if dim == 0 || &header[0] != "index" || &header[1] != "provenance" || &header[2] != "yaw" {
        return Err(LleError::Csv("header must be index,provenance,yaw,e1,...".into()));
    }
    let (mut provenance, mut yaw, mut values) = (Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| LleError::Csv(e.to_string()))?;
        let bad = |what: &str| LleError::Csv(format!("row {row}: invalid {what}"));
        if rec[0].parse::<usize>().ok() != Some(row) {
            return Err(bad("index"));
        }
        provenance.push(match &rec[1] {
            "original" => Provenance::Original,
            "flipped" => Provenance::Flipped,
            _ => return Err(bad("provenance")),
        });
        yaw.push(match &rec[2] {
            "" => None,
            s => Some(s.parse::<f64>().map_err(|_| bad("yaw"))?),
        });
        for c in 0..dim {
            values.push(rec[3 + c].parse::<f64>().map_err(|_| bad("coordinate"))?);
        }
    }
    if provenance.is_empty() {
        return Err(LleError::Csv("no rows".into()));
    }
    let coords = DMatrix::from_row_slice(provenance.len(), dim, &values);
    Ok(EmbeddingTable {
        provenance,
        yaw,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let set = ImageSet::from_vectors(vec![vec![0.0]; 3], Some(vec![-2.0, 0.0, 1.5])).unwrap();
        let coords = DMatrix::from_row_slice(3, 2, &[0.1, 1.0 / 3.0, -2.0e-17, 7.0, f64::MAX, -0.0]);
        let emb = Embedding::new(coords.clone(), vec![]).unwrap();
        let mut buf = Vec::new();
        write_embedding_csv(&mut buf, &emb, &set).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("index,provenance,yaw,e1,e2\n0,original,-2,0.1,"));
        let table = read_embedding_csv(buf.as_slice()).unwrap();
        assert_eq!(table.coords, coords);
        assert_eq!(table.yaw, vec![Some(-2.0), Some(0.0), Some(1.5)]);
        assert_eq!(table.provenance, vec![Provenance::Original; 3]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(read_embedding_csv("index,provenance,yaw,e1\n0,sideways,,1\n".as_bytes()).is_err());
        assert!(read_embedding_csv("index,provenance,yaw,e1\n1,original,,1\n".as_bytes()).is_err());
        assert!(read_embedding_csv("a,b\n".as_bytes()).is_err());
    }
}
