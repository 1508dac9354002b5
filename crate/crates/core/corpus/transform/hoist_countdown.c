void f(int n, int p, int q, int r) {
    int u;
    int v;
    u = 0;
    v = 0;
    while (n > 0) {
        u = v;
        v = p * q;
        r = r + u;
        n = n - 1;
    }
}
