void f(int n, int q) {
    int s;
    int p;
    s = 0;
    p = 1;
    for (int i = 0; i < n; i++) {
        s = s + i;
        p = p + 2 * q;
    }
}
