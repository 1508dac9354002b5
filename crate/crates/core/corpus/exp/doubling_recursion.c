int dbl(int x, int n) {
    int r;
    if (n > 0) {
        r = dbl(x + x, n - 1);
    } else {
        r = x;
    }
    return r;
}

void main(int x, int n) {
    int y;
    y = dbl(x, n);
}
