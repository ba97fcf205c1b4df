# SVG views
