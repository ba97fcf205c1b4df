# Patchfold configuration tables
