# fincat-herm package
