"""Text file formats for co-occurrences, embeddings, parameters and manifests."""
