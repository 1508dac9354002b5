int inc(int a) {
    int r;
    r = a + 1;
    return r;
}

void main(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        x = inc(x);
        y = y + x;
    }
    y = y + n;
}
