int sq(int x) {
    int r;
    r = x * x;
    return r;
}

void main(int n, int x) {
    int s;
    s = 0;
    for (int i = 0; i < n; i++) {
        s = sq(x);
    }
}
