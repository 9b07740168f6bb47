# Words package for Sturmian word generation and language extraction
