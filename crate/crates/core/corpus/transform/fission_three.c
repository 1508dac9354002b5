void f(int n, int x) {
    int a[16];
    int b[16];
    int s;
    s = 0;
    for (int i = 0; i < n; i++) {
        a[i] = x + i;
        s = s + x;
        b[i] = a[i] * 2;
    }
}
