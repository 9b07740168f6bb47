# Tests package for the Sturmian regularity toolkit
