# Sturmian regularity toolkit
